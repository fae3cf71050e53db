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

#include "kbqa/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "kbqa/error.hpp"
#include "kbqa/text.hpp"

namespace kbqa::pipeline {

// ---------------------------------------------------------------- lexicon

void Lexicon::add(LexiconEntry entry) {
  if (text::normalize_space(entry.surface).empty()) {
    throw ValidationError("lexicon surface must not be empty");
  }
  std::string k = text::key(entry.surface);
  switch (entry.kind) {
    case EntryKind::kTag: tags_[k] = entry.value; break;
    case EntryKind::kQuestionWord: qwords_[k] = entry.value; break;
    case EntryKind::kComparison: comparisons_.insert(k); break;
    case EntryKind::kSpecial: special_[k] = entry.value; break;
  }
  auto words = text::split_words(k);
  if (words.size() > 1) {
    phrases_.emplace_back(std::move(words), entries_.size());
    std::stable_sort(phrases_.begin(), phrases_.end(), [](const auto& a, const auto& b) {
      return a.first.size() > b.first.size();
    });
  }
  entries_.push_back(std::move(entry));
}

Lexicon Lexicon::parse(std::istream& in, const std::string& source) {
  Lexicon lex;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::normalize_space(line).empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) f.push_back(field);
    if (f.size() != 3) {
      throw ParseError(source + ": expected 3 tab-separated fields", n, 1,
                       {"surface<TAB>kind<TAB>value"});
    }
    EntryKind kind;
    if (f[1] == "tag") kind = EntryKind::kTag;
    else if (f[1] == "qword") kind = EntryKind::kQuestionWord;
    else if (f[1] == "cmp") kind = EntryKind::kComparison;
    else if (f[1] == "special") kind = EntryKind::kSpecial;
    else throw ParseError(source + ": unknown entry kind '" + f[1] + "'", n,
                          static_cast<int>(text::length(f[0])) + 2,
                          {"tag", "qword", "cmp", "special"});
    try {
      lex.add({text::normalize_space(f[0]), kind, f[2]});
    } catch (const ValidationError& e) {
      throw ParseError::located(source, e.what(), n, 1);
    }
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open lexicon " + path.string());
  return parse(in, path.string());
}

std::optional<std::string> Lexicon::tag_of(std::string_view word) const {
  auto it = tags_.find(text::key(word));
  if (it != tags_.end()) return it->second;
  auto sp = special_.find(text::key(word));
  if (sp != special_.end()) return sp->second;
  return std::nullopt;
}

std::optional<std::string> Lexicon::question_category(std::string_view surface) const {
  auto it = qwords_.find(text::key(surface));
  if (it == qwords_.end()) return std::nullopt;
  return it->second;
}

bool Lexicon::is_comparison(std::string_view surface) const {
  return comparisons_.count(text::key(surface)) != 0;
}

void PhraseTypeDictionary::add(std::string_view name) {
  std::string k = text::key(name);
  if (!k.empty()) names_.insert(std::move(k));
}

bool PhraseTypeDictionary::contains(std::string_view phrase) const {
  return names_.count(text::key(phrase)) != 0;
}

// ---------------------------------------------------------------- tokens

namespace {

struct Piece {
  std::size_t start;
  std::size_t end;
};

std::vector<Piece> split_pieces(const std::u32string& cps) {
  std::vector<Piece> out;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (text::is_space(cps[i])) {
      ++i;
    } else if (text::is_punct(cps[i])) {
      out.push_back({i, i + 1});
      ++i;
    } else {
      std::size_t j = i;
      while (j < cps.size() && !text::is_space(cps[j]) && !text::is_punct(cps[j])) ++j;
      out.push_back({i, j});
      i = j;
    }
  }
  return out;
}

bool all_punct(std::string_view s) {
  auto cps = text::decode(s);
  if (cps.empty()) return false;
  return std::all_of(cps.begin(), cps.end(), [](char32_t c) { return text::is_punct(c); });
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string guess_tag(Language lang, std::string_view word, bool first) {
  auto cps = text::decode(word);
  if (all_punct(word)) return lang == Language::kVi ? "CH" : ".";
  if (!cps.empty() && text::is_digit(cps[0])) return lang == Language::kVi ? "M" : "CD";
  bool upper = !cps.empty() && text::is_upper(cps[0]);
  if (lang == Language::kVi) return upper && !first ? "Np" : "Nc";
  std::string w = text::fold(word);
  if (ends_with(w, "ing") && w.size() > 4) return "VBG";
  if (ends_with(w, "ed") && w.size() > 3) return "VBN";
  if (ends_with(w, "ly") && w.size() > 3) return "RB";
  if (upper && !first) return "NNP";
  if (ends_with(w, "s") && !ends_with(w, "ss") && w.size() > 3) return "NNS";
  return "NN";
}

std::vector<AnnotationId> sorted_base(const Document& doc, Language lang) {
  return doc.of_type(base_type(lang));
}

bool in(const std::string& tag, std::initializer_list<const char*> set) {
  for (const char* s : set) {
    if (tag == s) return true;
  }
  return false;
}

bool is_noun_tag(const std::string& t) {
  return in(t, {"N", "Nc", "Ng", "Nu", "Na", "Np", "Nt", "NN", "NNS", "NNP", "NNPS"});
}
bool is_proper_tag(const std::string& t) { return in(t, {"Np", "NNP", "NNPS"}); }
bool is_verb_tag(const std::string& t) {
  return in(t, {"V", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ"});
}
bool is_prep_tag(const std::string& t) { return in(t, {"E", "IN", "TO"}); }
bool is_adj_tag(const std::string& t) { return in(t, {"A", "Aa", "An", "JJ", "JJR", "JJS"}); }

struct Tile {
  AnnotationId id;
  Span span;
  std::string tag;
  std::string word;  // folded, whitespace-normalized covered text
};

std::vector<Tile> tiles_of(const Document& doc, Language lang) {
  std::vector<Tile> out;
  for (AnnotationId id : base_tiling(doc, lang)) {
    const auto& a = doc.get(id);
    auto cat = a.feature("category");
    out.push_back({id, a.span, cat ? std::string(*cat) : std::string(), text::key(doc.substr(a.span))});
  }
  return out;
}

std::size_t tile_at(const std::vector<Tile>& tiles, std::size_t offset) {
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    if (tiles[i].span.start == offset) return i;
  }
  return tiles.size();
}

// Tiny backtracking matcher over tiles for the chunk grammars.
struct Slot {
  std::function<bool(const Tile&)> pred;
  char quant;  // '1', '?', '+', '*'
};

void reach(const std::vector<Tile>& tiles, const std::vector<Slot>& slots, std::size_t s,
           std::size_t i, std::size_t& best, bool& any) {
  if (s == slots.size()) {
    if (!any || i > best) best = i;
    any = true;
    return;
  }
  const Slot& slot = slots[s];
  bool many = slot.quant == '+' || slot.quant == '*';
  bool optional = slot.quant == '?' || slot.quant == '*';
  std::size_t j = i;
  std::size_t count = 0;
  while (j < tiles.size() && slot.pred(tiles[j]) && (many || count == 0)) {
    ++j;
    ++count;
    reach(tiles, slots, s + 1, j, best, any);
  }
  if (optional) reach(tiles, slots, s + 1, i, best, any);
}

std::optional<std::size_t> longest(const std::vector<Tile>& tiles, const std::vector<Slot>& slots,
                                   std::size_t i) {
  std::size_t best = 0;
  bool any = false;
  reach(tiles, slots, 0, i, best, any);
  if (!any || best == i) return std::nullopt;
  return best;
}

auto tag_in(std::initializer_list<const char*> set) {
  std::vector<std::string> v(set.begin(), set.end());
  return [v](const Tile& t) { return std::find(v.begin(), v.end(), t.tag) != v.end(); };
}

auto word_in(std::initializer_list<const char*> set) {
  std::vector<std::string> v(set.begin(), set.end());
  return [v](const Tile& t) { return std::find(v.begin(), v.end(), t.word) != v.end(); };
}

const std::vector<Slot>& np_grammar(Language lang) {
  static const std::vector<Slot> vi = {
      {tag_in({"Pn"}), '?'},
      {tag_in({"Nu", "Nn"}), '?'},
      {word_in({"cái", "chiếc"}), '?'},
      {tag_in({"Nt"}), '?'},
      {tag_in({"Nc", "Ng", "Nu", "Na", "Np", "N"}), '+'},
      {tag_in({"Aa", "An"}), '?'},
      {word_in({"này", "kia", "ấy", "đó"}), '?'},
  };
  static const std::vector<Slot> en = {
      {tag_in({"DT"}), '?'},
      {tag_in({"JJ", "JJR", "JJS"}), '*'},
      {tag_in({"NN", "NNS", "NNP", "NNPS", "CD"}), '+'},
  };
  return lang == Language::kVi ? vi : en;
}

}  // namespace

Document tokenize(std::string_view text, Language lang, const Lexicon* words) {
  Document doc{std::string(text)};
  auto cps = text::decode(text);
  auto pieces = split_pieces(cps);
  std::string type(base_type(lang));
  std::vector<std::string> folded;
  for (const auto& p : pieces) folded.push_back(text::fold(text::encode(cps.substr(p.start, p.end - p.start))));
  std::size_t i = 0;
  while (i < pieces.size()) {
    std::size_t take = 1;
    if (lang == Language::kVi && words != nullptr) {
      for (const auto& [ws, idx] : words->phrases()) {
        if (words->entries()[idx].kind != EntryKind::kTag) continue;
        if (ws.size() <= take || i + ws.size() > pieces.size()) continue;
        bool ok = true;
        for (std::size_t k = 0; k < ws.size() && ok; ++k) ok = folded[i + k] == ws[k];
        if (ok) take = ws.size();
      }
    }
    doc.add(type, Span{pieces[i].start, pieces[i + take - 1].end});
    i += take;
  }
  return doc;
}

Document tokenize_pretagged(std::string_view tagged, Language lang) {
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& item : text::split_words(tagged)) {
    auto slash = item.rfind('/');
    std::string word = item;
    std::string tag;
    if (slash != std::string::npos && slash > 0 && slash + 1 < item.size()) {
      word = item.substr(0, slash);
      tag = item.substr(slash + 1);
    }
    std::replace(word.begin(), word.end(), '_', ' ');
    items.emplace_back(std::move(word), std::move(tag));
  }
  std::string textbuf;
  std::vector<Span> spans;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) {
      textbuf += ' ';
      ++pos;
    }
    std::size_t len = text::length(items[i].first);
    spans.push_back({pos, pos + len});
    textbuf += items[i].first;
    pos += len;
  }
  Document doc(std::move(textbuf));
  std::string type(base_type(lang));
  for (std::size_t i = 0; i < items.size(); ++i) {
    FeatureMap f;
    if (!items[i].second.empty()) f["category"] = items[i].second;
    doc.add(type, spans[i], std::move(f));
  }
  return doc;
}

std::string plain_text(std::string_view question, bool pretagged) {
  if (!pretagged) return std::string(question);
  return tokenize_pretagged(question, Language::kEn).text();
}

void pos_tag(Document& doc, Language lang, const Lexicon& lexicon) {
  bool first = true;
  for (AnnotationId id : sorted_base(doc, lang)) {
    const auto& a = doc.get(id);
    if (!a.feature("category")) {
      std::string w = doc.substr(a.span);
      std::string tag;
      if (auto t = lexicon.tag_of(w)) tag = *t;
      else if (lexicon.is_comparison(w)) tag = "CMP";
      else tag = guess_tag(lang, w, first);
      doc.set_feature(id, "category", tag);
    }
    first = false;
  }
}

void mark_lexical_units(Document& doc, Language lang, const Lexicon& lexicon) {
  std::vector<AnnotationId> toks;
  for (AnnotationId id : sorted_base(doc, lang)) {
    if (!doc.get(id).feature("unit")) toks.push_back(id);
  }
  std::vector<std::vector<std::string>> words;
  for (AnnotationId id : toks) words.push_back(text::split_words(text::key(doc.covered_text(id))));
  std::string type(base_type(lang));
  std::size_t i = 0;
  while (i < toks.size()) {
    bool posted = false;
    for (const auto& [ws, idx] : lexicon.phrases()) {
      const auto& entry = lexicon.entries()[idx];
      if (entry.kind == EntryKind::kTag) continue;
      std::size_t w = 0, j = i;
      while (j < toks.size() && w < ws.size()) {
        const auto& tw = words[j];
        if (w + tw.size() > ws.size() || !std::equal(tw.begin(), tw.end(), ws.begin() + w)) break;
        w += tw.size();
        ++j;
      }
      if (w != ws.size() || j - i < 2) continue;
      FeatureMap f;
      switch (entry.kind) {
        case EntryKind::kQuestionWord:
          f = {{"category", "QW"}, {"question-word", entry.value}, {"unit", "qword"}};
          break;
        case EntryKind::kComparison:
          f = {{"category", "CMP"}, {"unit", "cmp"}};
          break;
        default:
          f = {{"category", entry.value}, {"unit", "special"}};
          break;
      }
      doc.add(type, Span{doc.get(toks[i]).span.start, doc.get(toks[j - 1]).span.end}, std::move(f));
      i = j;
      posted = true;
      break;
    }
    if (!posted) ++i;
  }
}

std::vector<AnnotationId> base_tiling(const Document& doc, Language lang) {
  std::vector<AnnotationId> out;
  const auto& base = doc.of_type(base_type(lang));
  std::size_t cursor = 0;
  std::size_t i = 0;
  while (i < base.size()) {
    const auto& a = doc.get(base[i]);
    if (a.span.start < cursor || a.span.length() == 0) {
      ++i;
      continue;
    }
    // Same start: longest first in of_type order; among equal spans prefer
    // the latest posted (lexical units over plain words).
    AnnotationId pick = base[i];
    std::size_t j = i + 1;
    while (j < base.size() && doc.get(base[j]).span == a.span) pick = base[j++];
    out.push_back(pick);
    cursor = a.span.end;
    i = j;
  }
  return out;
}

void mark_word_classes(Document& doc, Language lang) {
  for (const auto& t : tiles_of(doc, lang)) {
    if (is_noun_tag(t.tag)) doc.add("Noun", t.span);
    else if (is_verb_tag(t.tag)) doc.add("Verb", t.span);
    else if (is_prep_tag(t.tag)) doc.add("Preps", t.span);
    else if (is_adj_tag(t.tag)) doc.add("Adj", t.span);
  }
}

void chunk_noun_phrases(Document& doc, Language lang, const PhraseTypeDictionary* dict) {
  static const PhraseTypeDictionary kEmpty;
  auto tiles = tiles_of(doc, lang);
  const auto& grammar = np_grammar(lang);
  std::size_t i = 0;
  while (i < tiles.size()) {
    auto end = longest(tiles, grammar, i);
    if (!end) {
      ++i;
      continue;
    }
    AnnotationId np = doc.add("NounPhrase", Span{tiles[i].span.start, tiles[*end - 1].span.end});
    if (lang == Language::kVi) {
      doc.set_feature(np, "type", classify_phrase_type(doc, np, dict ? *dict : kEmpty, lang));
    }
    i = *end;
  }
}

std::string classify_phrase_type(const Document& doc, AnnotationId np,
                                 const PhraseTypeDictionary& dict, Language lang) {
  const auto& phrase = doc.get(np);
  int nouns = 0;
  bool proper = false;
  std::optional<std::size_t> first_noun;
  for (const auto& t : tiles_of(doc, lang)) {
    if (!phrase.span.contains(t.span)) continue;
    if (is_noun_tag(t.tag)) {
      ++nouns;
      if (!first_noun) first_noun = t.span.start;
    }
    proper = proper || is_proper_tag(t.tag);
  }
  if (proper || nouns >= 3) return "Entity";
  if (nouns == 1) return "Concept";
  if (dict.contains(doc.substr(phrase.span))) return "Concept";
  if (first_noun && dict.contains(doc.substr(Span{*first_noun, phrase.span.end}))) return "Concept";
  return "Entity";
}

void mark_question_phrases(Document& doc, Language lang, const Lexicon& lexicon) {
  auto tiles = tiles_of(doc, lang);
  std::map<std::size_t, AnnotationId> np_by_start, np_by_end;
  for (AnnotationId id : doc.of_type("NounPhrase")) {
    np_by_start.emplace(doc.get(id).span.start, id);
    np_by_end.emplace(doc.get(id).span.end, id);
  }
  auto np_after = [&](std::size_t i) -> std::optional<AnnotationId> {
    if (i + 1 >= tiles.size()) return std::nullopt;
    auto it = np_by_start.find(tiles[i + 1].span.start);
    if (it == np_by_start.end()) return std::nullopt;
    return it->second;
  };
  auto post = [&](std::size_t start, std::size_t end, const std::string& cat) {
    doc.add("QuestionPhrase", Span{start, end}, {{"category", cat}});
  };
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    auto cat = lexicon.question_category(doc.substr(tiles[i].span));
    if (!cat) continue;
    const Span& t = tiles[i].span;
    if (lang == Language::kVi) {
      if (*cat == "Entity") {
        if (i == 0) continue;
        auto it = np_by_end.find(tiles[i - 1].span.end);
        if (it != np_by_end.end()) post(doc.get(it->second).span.start, t.end, "Entity");
      } else if (*cat == "List") {
        if (auto np = np_after(i)) post(t.start, doc.get(*np).span.end, "List");
      } else if (*cat == "Many") {
        if (auto np = np_after(i)) post(t.start, doc.get(*np).span.end, "ManyClass");
        else post(t.start, t.end, "Many");
      } else {
        post(t.start, t.end, *cat);
      }
      continue;
    }
    if (*cat == "QU-whichClass") {
      if (auto np = np_after(i)) post(t.start, doc.get(*np).span.end, "QU-whichClass");
      else post(t.start, t.end, "QU-who-what");
    } else if (*cat == "QU-listClass") {
      std::size_t j = i + 1;
      while (j < tiles.size() && np_by_start.count(tiles[j].span.start) == 0 &&
             in(tiles[j].tag, {"DT", "PDT", "PRP"})) {
        ++j;
      }
      auto after = j < tiles.size() ? np_by_start.find(tiles[j].span.start) : np_by_start.end();
      auto own = np_by_start.find(t.start);
      if (after != np_by_start.end()) {
        post(t.start, doc.get(after->second).span.end, "QU-listClass");
      } else if (own != np_by_start.end() && doc.get(own->second).span.end > t.end) {
        post(t.start, doc.get(own->second).span.end, "QU-listClass");
      } else {
        post(t.start, t.end, "QU-listClass");
      }
    } else if (*cat == "QU-howmany") {
      if (auto np = np_after(i)) post(t.start, doc.get(*np).span.end, "QU-howmany");
      else post(t.start, t.end, "QU-howmany");
    } else if (*cat == "QU-yesno") {
      if (i == 0) post(t.start, t.end, "QU-yesno");
    } else {
      post(t.start, t.end, *cat);
    }
  }
}

void mark_relations(Document& doc, Language lang) {
  auto tiles = tiles_of(doc, lang);
  const std::size_t n = tiles.size();
  std::map<std::size_t, std::size_t> np_end;  // start tile -> end tile (exclusive)
  for (AnnotationId id : doc.of_type("NounPhrase")) {
    const auto& a = doc.get(id);
    if (lang == Language::kVi) {
      auto type = a.feature("type");
      if (!type || *type != "Concept") continue;
    }
    std::size_t s = tile_at(tiles, a.span.start);
    std::size_t e = s;
    while (e < n && tiles[e].span.end <= a.span.end) ++e;
    if (s < n) np_end[s] = e;
  }
  auto V = [&](std::size_t i) { return i < n && is_verb_tag(tiles[i].tag); };
  auto P = [&](std::size_t i) { return i < n && is_prep_tag(tiles[i].tag); };
  auto A = [&](std::size_t i) { return i < n && is_adj_tag(tiles[i].tag); };
  auto word = [&](std::size_t i, std::initializer_list<const char*> ws) {
    if (i >= n) return false;
    for (const char* w : ws) {
      if (tiles[i].word == w) return true;
    }
    return false;
  };
  auto have = [&](std::size_t i) {
    return lang == Language::kVi ? word(i, {"có"}) : word(i, {"have", "has", "had"});
  };
  auto copula = [&](std::size_t i) {
    return lang == Language::kVi ? word(i, {"là"}) : word(i, {"is", "are"});
  };
  auto np = [&](std::size_t i) -> std::optional<std::size_t> {
    auto it = np_end.find(i);
    if (it == np_end.end()) return std::nullopt;
    return it->second;
  };

  std::size_t i = 0;
  while (i < n) {
    std::size_t best = i;
    // (Verb)+ ((Prep)(Verb)?)?
    std::size_t m = i;
    while (V(m)) ++m;
    if (m > i) {
      best = std::max(best, m);
      if (P(m)) best = std::max(best, V(m + 1) ? m + 2 : m + 1);
      // (Verb)+ (NP concept) (Prep) (Verb)?
      for (std::size_t k = i + 1; k <= m; ++k) {
        auto e = np(k);
        if (e && P(*e)) best = std::max(best, V(*e + 1) ? *e + 2 : *e + 1);
      }
    }
    // (have | Verb)+ (Adj) (Prep) (Verb)?
    std::size_t h = i;
    while (h < n && (V(h) || have(h))) {
      ++h;
      if (A(h) && P(h + 1)) best = std::max(best, V(h + 2) ? h + 3 : h + 2);
    }
    // have ((NP concept) | Adj) copula
    if (have(i)) {
      std::optional<std::size_t> e = np(i + 1);
      if (!e && A(i + 1)) e = i + 2;
      if (e && copula(*e)) best = std::max(best, *e + 1);
    }
    if (best > i) {
      doc.add("Relation", Span{tiles[i].span.start, tiles[best - 1].span.end});
      i = best;
    } else {
      ++i;
    }
  }
}

Document Pipeline::run(std::string_view question, bool pretagged) const {
  Document doc = pretagged ? tokenize_pretagged(question, lang_) : tokenize(question, lang_, &lexicon_);
  pos_tag(doc, lang_, lexicon_);
  mark_lexical_units(doc, lang_, lexicon_);
  mark_word_classes(doc, lang_);
  chunk_noun_phrases(doc, lang_, &dict_);
  mark_question_phrases(doc, lang_, lexicon_);
  mark_relations(doc, lang_);
  return doc;
}

}  // namespace kbqa::pipeline
