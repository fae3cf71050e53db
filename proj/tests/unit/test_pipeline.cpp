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


#include <gtest/gtest.h>

#include <sstream>

#include "kbqa/error.hpp"
#include "kbqa/pipeline.hpp"
#include "support.hpp"

using namespace kbqa;
using namespace kbqa::pipeline;

namespace {

std::vector<std::string> texts(const Document& d, std::string_view type) {
  std::vector<std::string> out;
  for (auto id : d.of_type(type)) out.push_back(d.covered_text(id));
  return out;
}

std::string feature(const Document& d, std::string_view type, std::string_view covered,
                    std::string_view name) {
  for (auto id : d.of_type(type)) {
    if (d.covered_text(id) == covered) {
      auto f = d.get(id).feature(name);
      return f ? std::string(*f) : std::string("<none>");
    }
  }
  return "<missing>";
}

Pipeline make(Language lang) {
  auto lex = Lexicon::load(kbqa_test::data_dir() / "lexicon" / (lang == Language::kVi ? "vi.tsv" : "en.tsv"));
  PhraseTypeDictionary dict;
  for (const char* c : {"sinh viên", "lớp", "khoa", "bộ môn", "trường đại học", "khoa toán học"}) dict.add(c);
  return Pipeline(lang, std::move(lex), std::move(dict));
}

}  // namespace

TEST(Lexicon, ParsesKindsAndRejectsBadLines) {
  std::istringstream ok("# comment\n\nsinh viên\ttag\tN\nphải không\tqword\tYesNo\nlớn hơn\tcmp\tCMP\n");
  auto lex = Lexicon::parse(ok);
  EXPECT_EQ(lex.tag_of("Sinh Viên"), "N");
  EXPECT_EQ(lex.question_category("phải không"), "YesNo");
  EXPECT_TRUE(lex.is_comparison("lớn hơn"));
  EXPECT_EQ(lex.phrases().size(), 3u);

  std::istringstream bad_fields("a\ttag\n");
  try {
    Lexicon::parse(bad_fields, "x.tsv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
  }
  std::istringstream bad_kind("ok\ttag\tN\nword\tverbish\tV\n");
  try {
    Lexicon::parse(bad_kind);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 6);
  }
  EXPECT_THROW(Lexicon::load("/nonexistent/lexicon.tsv"), LookupError);
}

TEST(Tokenize, VietnameseMergesLexiconWords) {
  auto lex = Lexicon::load(kbqa_test::data_dir() / "lexicon" / "vi.tsv");
  auto d = tokenize("Liệt kê tất cả sinh viên học lớp K50", Language::kVi, &lex);
  EXPECT_EQ(texts(d, "TokenVn"),
            (std::vector<std::string>{"Liệt", "kê", "tất cả", "sinh viên", "học", "lớp", "K50"}));
}

TEST(Tokenize, PretaggedKeepsTagsAndExpandsUnderscore) {
  auto d = tokenize_pretagged("Hà_Nội/Np có/V ?/CH", Language::kVi);
  EXPECT_EQ(d.text(), "Hà Nội có ?");
  EXPECT_EQ(texts(d, "TokenVn"), (std::vector<std::string>{"Hà Nội", "có", "?"}));
  EXPECT_EQ(feature(d, "TokenVn", "Hà Nội", "category"), "Np");
  EXPECT_EQ(plain_text("Who/WP is/VBZ", true), "Who is");
}

TEST(PosTag, LexiconThenShapeRules) {
  auto lex = Lexicon::load(kbqa_test::data_dir() / "lexicon" / "en.tsv");
  auto d = tokenize("Which researchers wrote 3 papers on Magpie", Language::kEn);
  pos_tag(d, Language::kEn, lex);
  EXPECT_EQ(feature(d, "Token", "Which", "category"), "WDT");
  EXPECT_EQ(feature(d, "Token", "researchers", "category"), "NNS");
  EXPECT_EQ(feature(d, "Token", "wrote", "category"), "VBD");
  EXPECT_EQ(feature(d, "Token", "3", "category"), "CD");
  EXPECT_EQ(feature(d, "Token", "Magpie", "category"), "NNP");
}

TEST(LexicalUnits, QuestionAndComparisonPhrases) {
  auto p = make(Language::kVi);
  auto d = p.run("số lượng sinh viên lớn hơn 45 phải không ?");
  EXPECT_EQ(feature(d, "TokenVn", "phải không", "question-word"), "YesNo");
  EXPECT_EQ(feature(d, "TokenVn", "lớn hơn", "category"), "CMP");
  EXPECT_EQ(feature(d, "TokenVn", "số lượng", "question-word"), "Many");
}

TEST(Chunking, VietnameseNounPhraseTypes) {
  auto p = make(Language::kVi);
  auto d = p.run("Liệt kê tất cả các sinh viên học lớp K50 khoa học máy tính");
  EXPECT_EQ(feature(d, "NounPhrase", "tất cả các sinh viên", "type"), "Concept");
  EXPECT_EQ(feature(d, "NounPhrase", "lớp K50 khoa học máy tính", "type"), "Entity");
  auto d2 = p.run("sinh viên học khoa toán học");
  EXPECT_EQ(feature(d2, "NounPhrase", "khoa toán học", "type"), "Concept");
  auto d3 = p.run("sinh viên học khoa vật lý");
  EXPECT_EQ(feature(d3, "NounPhrase", "khoa vật lý", "type"), "Entity");
}

TEST(Chunking, EnglishNounPhrases) {
  auto p = make(Language::kEn);
  auto d = p.run("Which/WDT presidents/NNS of/IN the/DT United/NNP States/NNPS had/VBD more/JJR than/IN "
                 "three/CD children/NNS", true);
  EXPECT_EQ(texts(d, "NounPhrase"),
            (std::vector<std::string>{"presidents", "the United States", "three children"}));
}

TEST(QuestionPhrases, VietnameseCategories) {
  auto p = make(Language::kVi);
  auto d = p.run("Phạm Đức Đăng học trường đại học nào và được hướng dẫn bởi ai ?");
  EXPECT_EQ(feature(d, "QuestionPhrase", "trường đại học nào", "category"), "Entity");
  EXPECT_EQ(feature(d, "QuestionPhrase", "ai", "category"), "Who");
  auto m = p.run("số lượng sinh viên học lớp K50 khoa học máy tính là 45 phải không ?");
  EXPECT_EQ(feature(m, "QuestionPhrase", "số lượng sinh viên", "category"), "ManyClass");
  EXPECT_EQ(feature(m, "QuestionPhrase", "phải không", "category"), "YesNo");
  auto l = p.run("Liệt kê tất cả sinh viên");
  EXPECT_EQ(feature(l, "QuestionPhrase", "Liệt kê tất cả sinh viên", "category"), "List");
}

TEST(QuestionPhrases, EnglishCategories) {
  auto p = make(Language::kEn);
  auto a = p.run("Which/WDT universities/NNS are/VBP KMi/NNP partners/NNS", true);
  EXPECT_EQ(feature(a, "QuestionPhrase", "Which universities", "category"), "QU-whichClass");
  auto b = p.run("What/WP are/VBP research/NN areas/NNS ?/.", true);
  EXPECT_EQ(feature(b, "QuestionPhrase", "What", "category"), "QU-who-what");
  auto c = p.run("List/VB all/PDT the/DT publications/NNS", true);
  EXPECT_EQ(feature(c, "QuestionPhrase", "List all the publications", "category"), "QU-listClass");
  auto d = p.run("List/NN drugs/NNS that/WDT lead/VBP to/TO strokes/NNS", true);
  EXPECT_EQ(feature(d, "QuestionPhrase", "List drugs", "category"), "QU-listClass");
  EXPECT_EQ(feature(d, "QuestionPhrase", "that", "category"), "QU-who-what");
  auto e = p.run("Is/VBZ Tran/NNP a/DT student/NN and/CC is/VBZ he/PRP ?/.", true);
  EXPECT_EQ(texts(e, "QuestionPhrase"), std::vector<std::string>{"Is"});
  auto f = p.run("How many projects are there", false);
  EXPECT_EQ(feature(f, "QuestionPhrase", "How many projects", "category"), "QU-howmany");
}

TEST(Relations, EnglishShapes) {
  auto p = make(Language::kEn);
  auto a = p.run("Which/WDT projects/NNS sponsored/VBN by/IN eprsc/NN are/VBP related/VBN to/TO "
                 "semantic/JJ web/NN ?/.", true);
  EXPECT_EQ(texts(a, "Relation"), (std::vector<std::string>{"sponsored by", "are related to"}));
  auto b = p.run("Who/WP are/VBP the/DT researchers/NNS in/IN semantic/JJ web/NN", true);
  EXPECT_EQ(texts(b, "Relation"), std::vector<std::string>{"are the researchers in"});
  auto c = p.run("Which/WDT presidents/NNS had/VBD more/JJR than/IN three/CD children/NNS", true);
  EXPECT_EQ(texts(c, "Relation"), std::vector<std::string>{"had more than"});
}

TEST(Relations, VietnameseShapes) {
  auto p = make(Language::kVi);
  auto a = p.run("sinh viên mà có quê ở Hà Nội");
  EXPECT_EQ(texts(a, "Relation"), std::vector<std::string>{"có quê ở"});
  auto b = p.run("Phạm Đức Đăng được hướng dẫn bởi ai ?");
  EXPECT_EQ(texts(b, "Relation"), std::vector<std::string>{"được hướng dẫn bởi"});
  auto c = p.run("lớp K50 khoa học máy tính có sinh viên là Phạm Đức Đăng");
  EXPECT_EQ(texts(c, "Relation"), std::vector<std::string>{"có sinh viên là"});
}

TEST(WordClasses, OneAnnotationPerTile) {
  auto p = make(Language::kEn);
  auto d = p.run("Who/WP wrote/VBD in/IN the/DT big/JJ area/NN", true);
  EXPECT_EQ(texts(d, "Verb"), std::vector<std::string>{"wrote"});
  EXPECT_EQ(texts(d, "Preps"), std::vector<std::string>{"in"});
  EXPECT_EQ(texts(d, "Adj"), std::vector<std::string>{"big"});
  EXPECT_EQ(texts(d, "Noun"), std::vector<std::string>{"area"});
}
