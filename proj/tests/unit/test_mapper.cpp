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


#include <algorithm>
#include <fstream>

#include <gtest/gtest.h>

#include "kbqa/engine.hpp"
#include "kbqa/error.hpp"
#include "kbqa/mapper.hpp"
#include "kbqa/text.hpp"
#include "support.hpp"

using namespace kbqa;
using namespace kbqa::mapping;

namespace {

// Plain two-row Levenshtein over code points, case folded.
double dp_similarity(std::string_view a, std::string_view b) {
  auto x = text::decode(text::fold(a));
  auto y = text::decode(text::fold(b));
  std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  std::size_t m = std::max(x.size(), y.size());
  return m == 0 ? 1.0 : 1.0 - static_cast<double>(prev[y.size()]) / static_cast<double>(m);
}

onto::Ontology tiny() {
  return onto::Ontology::from_json(nlohmann::json::parse(R"({
    "concepts": [
      {"name": "person"},
      {"name": "student", "parent": "person", "synonyms": ["students"]},
      {"name": "city", "synonyms": ["cities"]}
    ],
    "relations": [
      {"name": "supervises"},
      {"name": "lives in", "synonyms": ["home"]},
      {"name": "born in"}
    ],
    "instances": [
      {"name": "ann", "concepts": ["student"]},
      {"name": "anna", "concepts": ["student"]},
      {"name": "bob", "concepts": ["student"], "synonyms": ["robert"]},
      {"name": "rob", "concepts": ["person"], "synonyms": ["robert"]},
      {"name": "hanoi", "concepts": ["city"]}
    ],
    "assertions": [
      {"s": "ann", "r": "lives in", "o": "hanoi"},
      {"s": "anna", "r": "lives in", "o": "hanoi"},
      {"s": "anna", "r": "born in", "o": "hanoi"},
      {"s": "rob", "r": "supervises", "o": "bob"}
    ]})"));
}

MapperConfig en() { return MapperConfig::for_language(Language::kEn); }

}  // namespace

TEST(Similarity, KnownValues) {
  EXPECT_DOUBLE_EQ(similarity("enroll", "enrolled"), 0.75);
  EXPECT_DOUBLE_EQ(similarity("", ""), 1.0);
  EXPECT_DOUBLE_EQ(similarity("abc", ""), 0.0);
  EXPECT_DOUBLE_EQ(similarity("Hà Nội", "hà nội"), 1.0);
  EXPECT_DOUBLE_EQ(similarity("quê", "que"), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(similarity("kitten", "sitting"), 1.0 - 3.0 / 7.0);
}

TEST(Similarity, AgreesWithDirectDp) {
  const char* words[] = {"sinh viên", "sinh vien", "học", "hoc", "enroll", "enrolled",
                         "Đà Nẵng", "đà nẵng", "naïve", "naive", "", "x"};
  for (auto a : words) {
    for (auto b : words) EXPECT_DOUBLE_EQ(similarity(a, b), dp_similarity(a, b)) << a << " / " << b;
  }
}

TEST(MapTerm, ExactBySynonymAfterStopWords) {
  auto o = tiny();
  auto r = map_term("the students", ElementKind::kConcept, o, en());
  ASSERT_TRUE(r.exact());
  EXPECT_EQ(r.candidates.front(), (Candidate{"student", 1.0}));
  auto rel = map_term("supervises by", ElementKind::kRelation, o, en());
  ASSERT_TRUE(rel.exact());
  EXPECT_EQ(rel.candidates.front().name, "supervises");
  EXPECT_TRUE(map_term("zebra", ElementKind::kConcept, o, en()).none());
  EXPECT_TRUE(map_term("12", ElementKind::kLiteral, o, en()).none());
}

TEST(MapTerm, SeveralExactHitsBecomeCandidates) {
  auto o = tiny();
  auto r = map_term("robert", ElementKind::kInstance, o, en());
  EXPECT_EQ(r.kind, MappingResult::Kind::kCandidates);
  ASSERT_EQ(r.candidates.size(), 2u);
  EXPECT_EQ(r.candidates[0].name, "bob");
  EXPECT_EQ(r.candidates[1].name, "rob");
}

TEST(MapTerm, ApproximateRankedByScoreThenLength) {
  auto o = tiny();
  MapperConfig c = en();
  c.threshold = 0.5;
  auto r = map_term("annx", ElementKind::kInstance, o, c);
  ASSERT_EQ(r.kind, MappingResult::Kind::kCandidates);
  ASSERT_EQ(r.candidates.size(), 2u);
  EXPECT_EQ(r.candidates[0].name, "ann");
  EXPECT_DOUBLE_EQ(r.candidates[0].score, dp_similarity("annx", "ann"));
  EXPECT_EQ(r.candidates[1].name, "anna");
  EXPECT_DOUBLE_EQ(r.candidates[1].score, dp_similarity("annx", "anna"));
  c.threshold = 0.8;
  EXPECT_TRUE(map_term("annx", ElementKind::kInstance, o, c).none());
}

TEST(MapTuple, ResolvesRelationWithinPool) {
  auto o = tiny();
  QueryTuple t{"Normal", "QU-whichClass", "students", "lives", "hanoi", std::nullopt};
  MapperConfig c = en();
  c.threshold = 0.6;
  auto m = map_query_tuple(t, 0, o, c);
  ASSERT_TRUE(std::holds_alternative<OntologyTuple>(m));
  const auto& ot = std::get<OntologyTuple>(m);
  EXPECT_EQ(ot.term1, (Element{"student", ElementKind::kConcept}));
  EXPECT_EQ(ot.term2, (Element{"hanoi", ElementKind::kInstance}));
  EXPECT_EQ(ot.relation, "lives in");
}

TEST(MapTuple, UnknRelTakesTheOnlyLinkingRelation) {
  auto o = tiny();
  QueryTuple t{"UnknRel", "QU-who-what", "ann", std::nullopt, "hanoi", std::nullopt};
  auto m = map_query_tuple(t, 0, o, en());
  ASSERT_TRUE(std::holds_alternative<OntologyTuple>(m));
  EXPECT_EQ(std::get<OntologyTuple>(m).relation, "lives in");

  QueryTuple two{"UnknRel", "QU-who-what", "anna", std::nullopt, "hanoi", std::nullopt};
  auto p = map_query_tuple(two, 1, o, en());
  ASSERT_TRUE(std::holds_alternative<PendingChoice>(p));
  EXPECT_EQ(std::get<PendingChoice>(p).candidates,
            (std::vector<std::string>{"born in", "lives in"}));
}

TEST(MapTuple, LiteralsAndFailures) {
  auto o = tiny();
  QueryTuple lit{"Normal", "QU-howmany", "ann", "lives in", "42", std::nullopt};
  auto m = map_query_tuple(lit, 0, o, en());
  ASSERT_TRUE(std::holds_alternative<OntologyTuple>(m));
  EXPECT_EQ(std::get<OntologyTuple>(m).term2, (Element{"42", ElementKind::kLiteral}));

  QueryTuple bad{"Normal", "QU-whichClass", "students", "lives in", "paris", std::nullopt};
  try {
    map_query_tuple(bad, 0, o, en());
    FAIL() << "expected MappingError";
  } catch (const MappingError& e) {
    EXPECT_EQ(e.slot(), "term2");
    EXPECT_EQ(e.term(), "paris");
  }
  QueryTuple rel{"Normal", "QU-whichClass", "students", "eats", "hanoi", std::nullopt};
  EXPECT_THROW(map_query_tuple(rel, 0, o, en()), MappingError);
  QueryTuple sub{"Whatever", "QU-whichClass", "students", "eats", "hanoi", std::nullopt};
  EXPECT_THROW(map_query_tuple(sub, 0, o, en()), ValidationError);
}

TEST(MapIr, PendingChoiceThenResume) {
  auto o = tiny();
  IntermediateRepresentation ir{
      QuestionStructure::kNormal,
      {{"Normal", "QU-who-what", "robert", "supervises", "bob", std::nullopt}}};
  auto first = map_ir(ir, o, en());
  ASSERT_TRUE(std::holds_alternative<PendingChoice>(first));
  auto pending = std::get<PendingChoice>(first);
  EXPECT_EQ(pending.choice_id, "t0-term1");
  EXPECT_EQ(pending.slot, SlotName::kTerm1);
  EXPECT_EQ(pending.term, "robert");
  EXPECT_EQ(pending.candidates, (std::vector<std::string>{"bob", "rob"}));
  EXPECT_EQ(to_json(pending)["slot"], "term1");

  Choices choices;
  EXPECT_THROW(resolve_choice(pending, "ann", choices), ValidationError);
  EXPECT_TRUE(choices.empty());
  resolve_choice(pending, "rob", choices);
  auto second = map_ir(ir, o, en(), choices);
  ASSERT_TRUE(std::holds_alternative<std::vector<OntologyTuple>>(second));
  const auto& tuples = std::get<std::vector<OntologyTuple>>(second);
  EXPECT_EQ(tuples[0].term1, (Element{"rob", ElementKind::kInstance}));
  EXPECT_EQ(tuples[0].relation, "supervises");
}

TEST(MapIr, ClassCandidatesOfTheVietnameseOntology) {
  auto cfg = EngineConfig::load(kbqa_test::data_dir() / "config/vi.json");
  Engine engine(cfg);
  const std::string term = "lớp khoa học máy tính";
  auto r = map_term(term, ElementKind::kInstance, engine.ontology(),
                    MapperConfig::for_language(Language::kVi));
  ASSERT_EQ(r.kind, MappingResult::Kind::kCandidates);
  ASSERT_EQ(r.candidates.size(), 2u);
  EXPECT_EQ(r.candidates[0].name, "lớp K50 khoa học máy tính");
  EXPECT_EQ(r.candidates[1].name, "bộ môn khoa học máy tính");
  EXPECT_GT(r.candidates[0].score, r.candidates[1].score);
  // each score is the best of the whole-name and head-stripped comparisons
  EXPECT_DOUBLE_EQ(r.candidates[0].score,
                   std::max({dp_similarity(term, "lớp K50 khoa học máy tính"),
                             dp_similarity(term, "K50 khoa học máy tính"),
                             dp_similarity("khoa học máy tính", "lớp K50 khoa học máy tính")}));
  EXPECT_DOUBLE_EQ(r.candidates[1].score,
                   std::max({dp_similarity(term, "bộ môn khoa học máy tính"),
                             dp_similarity(term, "khoa học máy tính"),
                             dp_similarity("khoa học máy tính", "bộ môn khoa học máy tính")}));
}
