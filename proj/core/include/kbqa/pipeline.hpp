// Copyright 2026 The kbqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kbqa/annotation.hpp"
#include "kbqa/language.hpp"

namespace kbqa::pipeline {

enum class EntryKind { kTag, kQuestionWord, kComparison, kSpecial };

struct LexiconEntry {
  std::string surface;
  EntryKind kind = EntryKind::kTag;
  std::string value;  // POS tag, question category, or tag for special units
};

/// Word list, POS lexicon and lexical-unit inventory of one language.
///
/// File format: one entry per line, `surface<TAB>kind<TAB>value`, kind one of
/// tag, qword, cmp, special. Blank lines and lines starting with '#' are skipped.
class Lexicon {
 public:
  void add(LexiconEntry entry);

  static Lexicon parse(std::istream& in, const std::string& source = "<lexicon>");
  static Lexicon load(const std::filesystem::path& path);

  /// POS tag of a word (case-insensitive).
  std::optional<std::string> tag_of(std::string_view word) const;
  /// Question-word category of a surface (case-insensitive).
  std::optional<std::string> question_category(std::string_view surface) const;
  bool is_comparison(std::string_view surface) const;

  const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }
  /// Multi-word surfaces, each split into folded words, longest first.
  const std::vector<std::pair<std::vector<std::string>, std::size_t>>& phrases() const noexcept {
    return phrases_;
  }

 private:
  std::vector<LexiconEntry> entries_;
  std::map<std::string, std::string, std::less<>> tags_;
  std::map<std::string, std::string, std::less<>> qwords_;
  std::map<std::string, std::string, std::less<>> special_;
  std::set<std::string, std::less<>> comparisons_;
  std::vector<std::pair<std::vector<std::string>, std::size_t>> phrases_;  // words, entry index
};

/// Concept names and synonyms used to type ambiguous noun phrases.
class PhraseTypeDictionary {
 public:
  void add(std::string_view name);
  bool contains(std::string_view phrase) const;
  std::size_t size() const noexcept { return names_.size(); }

 private:
  std::set<std::string, std::less<>> names_;
};

/// Whitespace/punctuation tokenization; for vi, adjacent syllables forming a
/// lexicon word are merged into one TokenVn.
Document tokenize(std::string_view text, Language lang, const Lexicon* words = nullptr);

/// Input of the form `w1/T1 w2/T2 ...`; '_' inside a word stands for a space.
/// Tokens without a tag are left untagged for pos_tag.
Document tokenize_pretagged(std::string_view tagged, Language lang);

/// Fills the `category` feature of base tokens: pre-tags are kept, then the
/// lexicon, then suffix and shape rules.
void pos_tag(Document& doc, Language lang, const Lexicon& lexicon);

/// Posts one base annotation over each multi-token lexicon unit (question
/// words, comparison phrases, special abbreviations), longest first.
void mark_lexical_units(Document& doc, Language lang, const Lexicon& lexicon);

/// The longest base annotation at each position, left to right.
std::vector<AnnotationId> base_tiling(const Document& doc, Language lang);

/// Posts Noun, Verb, Preps and Adj annotations over base tiles.
void mark_word_classes(Document& doc, Language lang);

void chunk_noun_phrases(Document& doc, Language lang, const PhraseTypeDictionary* dict = nullptr);

/// "Concept" or "Entity".
std::string classify_phrase_type(const Document& doc, AnnotationId np,
                                 const PhraseTypeDictionary& dict, Language lang = Language::kVi);

void mark_question_phrases(Document& doc, Language lang, const Lexicon& lexicon);

void mark_relations(Document& doc, Language lang);

class Pipeline {
 public:
  Pipeline(Language lang, Lexicon lexicon, PhraseTypeDictionary dict)
      : lang_(lang), lexicon_(std::move(lexicon)), dict_(std::move(dict)) {}

  Document run(std::string_view question, bool pretagged = false) const;

  Language language() const noexcept { return lang_; }
  const Lexicon& lexicon() const noexcept { return lexicon_; }
  const PhraseTypeDictionary& dictionary() const noexcept { return dict_; }

 private:
  Language lang_;
  Lexicon lexicon_;
  PhraseTypeDictionary dict_;
};

/// Text of a question with any `/TAG` suffixes removed and '_' expanded.
std::string plain_text(std::string_view question, bool pretagged);

}  // namespace kbqa::pipeline
