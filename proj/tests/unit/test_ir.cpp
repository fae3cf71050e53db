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

#include "kbqa/ir.hpp"

using namespace kbqa;

namespace {

QueryTuple tup(std::string sub, std::string cat, std::optional<std::string> t1,
               std::optional<std::string> rel, std::optional<std::string> t2,
               std::optional<std::string> t3 = std::nullopt) {
  return {std::move(sub), std::move(cat), std::move(t1), std::move(rel), std::move(t2),
          std::move(t3)};
}

}  // namespace

TEST(Structure, NamesRoundTrip) {
  for (auto s : kAllStructures) {
    auto back = parse_structure(to_string(s));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, s);
  }
  EXPECT_FALSE(parse_structure("normal").has_value());
  EXPECT_EQ(to_string(QuestionStructure::kAffirmMoreTuples), "Affirm_MoreTuples");
}

TEST(Structure, SimpleVersusComposite) {
  int composite = 0;
  for (auto s : kAllStructures) composite += is_simple(s) ? 0 : 1;
  EXPECT_EQ(composite, 5);
  EXPECT_FALSE(is_simple(QuestionStructure::kAnd));
  EXPECT_TRUE(is_simple(QuestionStructure::kAffirm3Term));
}

TEST(Categories, Registries) {
  EXPECT_EQ(category_registry(Language::kVi).size(), 10u);
  EXPECT_EQ(category_registry(Language::kEn).size(), 5u);
  EXPECT_TRUE(is_known_category("ManyClass"));
  EXPECT_TRUE(is_known_category("QU-howmany"));
  EXPECT_FALSE(is_known_category("QU-when"));
}

TEST(Ir, JsonAndTextRoundTrip) {
  IntermediateRepresentation ir{QuestionStructure::kAnd,
                                {tup("Normal", "List", "sinh viên", "học", "lớp K50 KHMT"),
                                 tup("Normal", "List", "sinh viên", "có quê", "Hà Tây")}};
  auto back = ir_from_json(to_json(ir));
  EXPECT_EQ(back, ir);
  EXPECT_EQ(to_text(ir.tuples[0]), "(Normal, List, sinh viên, học, lớp K50 KHMT, ?)");
  EXPECT_EQ(to_text(ir).rfind("And (Normal", 0), 0u);
  EXPECT_THROW(ir_from_json({{"structure", "Nope"}, {"tuples", nlohmann::json::array()}}),
               ValidationError);
}

TEST(Ir, ValidationMessages) {
  IntermediateRepresentation ok{QuestionStructure::kNormal,
                                {tup("Normal", "QU-whichClass", "projects", "sponsored by", "eprsc")}};
  EXPECT_TRUE(validate_ir(ok).empty());

  IntermediateRepresentation empty{QuestionStructure::kNormal, {}};
  ASSERT_FALSE(validate_ir(empty).empty());
  EXPECT_EQ(validate_ir(empty)[0], "Normal: no query tuples");

  IntermediateRepresentation two{QuestionStructure::kNormal, {ok.tuples[0], ok.tuples[0]}};
  EXPECT_EQ(validate_ir(two)[0], "Normal requires exactly one query tuple, got 2");

  IntermediateRepresentation lone_and{QuestionStructure::kAnd, {ok.tuples[0]}};
  EXPECT_EQ(validate_ir(lone_and)[0], "And requires at least two query tuples, got 1");

  IntermediateRepresentation bad_cat{QuestionStructure::kNormal,
                                     {tup("Normal", "QU-when", "a", "b", "c")}};
  EXPECT_EQ(validate_ir(bad_cat)[0], "tuple 1: unknown category 'QU-when'");

  IntermediateRepresentation t3{QuestionStructure::kNormal,
                                {tup("Normal", "List", "a", "b", "c", "d")}};
  EXPECT_EQ(validate_ir(t3)[0], "tuple 1: Normal must not have Term3");
  t3.structure = QuestionStructure::kCompare;
  EXPECT_TRUE(validate_ir(t3).empty());

  IntermediateRepresentation unkn{QuestionStructure::kUnknTerm,
                                  {tup("UnknTerm", "QU-who-what", "x", "wrote", "y")}};
  EXPECT_EQ(validate_ir(unkn)[0], "tuple 1: UnknTerm must not have Term1");

  IntermediateRepresentation def{QuestionStructure::kDefinition,
                                 {tup("Definition", "QU-who-what", std::nullopt, "is", "x")}};
  EXPECT_EQ(validate_ir(def)[0], "tuple 1: Definition must carry Term2 only");

  IntermediateRepresentation three{QuestionStructure::kThreeTerm,
                                   {tup("ThreeTerm", "List", "a", "b", "c")}};
  EXPECT_EQ(validate_ir(three)[0], "tuple 1: ThreeTerm requires Term3");
}

TEST(Slot, ParseForms) {
  EXPECT_EQ(Slot::parse("?").kind, Slot::Kind::kAbsent);
  EXPECT_EQ(Slot::parse("").kind, Slot::Kind::kAbsent);
  auto a = Slot::parse("RDR1_left");
  EXPECT_EQ(a.kind, Slot::Kind::kCoveredText);
  EXPECT_EQ(a.type, "RDR1_left");
  auto b = Slot::parse("RDR1_.Sub");
  EXPECT_EQ(b.kind, Slot::Kind::kStructureFeature);
  EXPECT_EQ(b.feature, "Sub");
  auto c = Slot::parse("RDR1_QP.QuestionPhrase.category");
  EXPECT_EQ(c.kind, Slot::Kind::kFeatureOf);
  EXPECT_EQ(c.colocated, "QuestionPhrase");
  EXPECT_EQ(c.feature, "category");
  for (const char* s : {"?", "X", "X.f", "X.T.f"}) EXPECT_EQ(Slot::parse(s).to_text(), s);
  EXPECT_THROW(Slot::parse("a..b"), ValidationError);
  EXPECT_THROW(Slot::parse("a.b.c.d"), ValidationError);
  EXPECT_THROW(Slot::parse(".a"), ValidationError);
}

TEST(Template, JsonAndReferencedTypes) {
  nlohmann::json j = {
      {"structure", "Normal"},
      {"tuples", {{"Normal", "QP.QuestionPhrase.category", "L", "R", "?", "?"}}}};
  auto t = template_from_json(j);
  EXPECT_EQ(to_json(t), j);
  EXPECT_EQ(referenced_types(t), (std::vector<std::string>{"Normal", "QP", "L", "R"}));
  EXPECT_THROW(template_from_json({{"structure", "Normal"}, {"tuples", {{"a", "b"}}}}),
               ValidationError);
  EXPECT_THROW(template_from_json({{"structure", "Normal"}, {"tuples", nlohmann::json::array()}}),
               ValidationError);
}

TEST(Trim, StripsEdgesOnly) {
  const auto& en = SurfaceTrim::for_language(Language::kEn);
  EXPECT_EQ(en.term("Which projects"), "projects");
  EXPECT_EQ(en.term("the Semantic Web"), "Semantic Web");
  EXPECT_EQ(en.term("How many children"), "children");
  EXPECT_EQ(en.relation("are sponsored by"), "sponsored by");
  EXPECT_EQ(en.term("project which"), "project which");
  const auto& vi = SurfaceTrim::for_language(Language::kVi);
  EXPECT_EQ(vi.term("tất cả các sinh viên"), "sinh viên");
  EXPECT_EQ(vi.term("trường nào"), "trường");
  EXPECT_EQ(vi.relation("được hướng dẫn bởi"), "hướng dẫn bởi");
  EXPECT_EQ(SurfaceTrim::none().term("the x"), "the x");
}

TEST(Instantiate, ReadsLatestAnnotations) {
  Document d("Which projects are sponsored by eprsc ?");
  auto qp = d.add("QuestionPhrase", {0, 14}, {{"category", "QU-whichClass"}});
  (void)qp;
  d.add("RDR1_QP", {0, 14});
  d.add("RDR1_left", {0, 14});
  d.add("RDR1_Rel", {15, 31});
  d.add("RDR1_right", {32, 37});
  d.add("RDR1_", {0, 37}, {{"Sub", "Normal"}});
  auto t = template_from_json(
      {{"structure", "Normal"},
       {"tuples",
        {{"RDR1_.Sub", "RDR1_QP.QuestionPhrase.category", "RDR1_left", "RDR1_Rel", "RDR1_right",
          "?"}}}});
  auto ir = instantiate(t, d, SurfaceTrim::for_language(Language::kEn));
  ASSERT_EQ(ir.tuples.size(), 1u);
  EXPECT_EQ(ir.tuples[0],
            tup("Normal", "QU-whichClass", "projects", "sponsored by", "eprsc"));

  // a later annotation of the same type wins
  d.add("RDR1_right", {33, 37});
  auto ir2 = instantiate(t, d, SurfaceTrim::for_language(Language::kEn));
  EXPECT_EQ(ir2.tuples[0].term2, "prsc");
}

TEST(Instantiate, MissingPiecesNameTheSlot) {
  Document d("x");
  d.add("S", {0, 1}, {{"sub", "Normal"}, {"cat", "List"}});
  auto t = template_from_json({{"structure", "Normal"},
                               {"tuples", {{"S.sub", "S.cat", "A", "?", "?", "?"}}}});
  try {
    instantiate(t, d);
    FAIL() << "expected InstantiationError";
  } catch (const InstantiationError& e) {
    EXPECT_NE(std::string(e.what()).find("tuple 1 Term1: no A annotation"), std::string::npos);
  }
  d.add("A", {0, 1});
  auto f = template_from_json({{"structure", "Normal"},
                               {"tuples", {{"A.Sub", "List", "?", "?", "?", "?"}}}});
  EXPECT_THROW(instantiate(f, d), InstantiationError);
  auto g = template_from_json({{"structure", "Normal"},
                               {"tuples", {{"S.sub", "A.B.c", "?", "?", "?", "?"}}}});
  EXPECT_THROW(instantiate(g, d), InstantiationError);
}

TEST(Matches, TrailingPrepositionAllowance) {
  const auto& en = SurfaceTrim::for_language(Language::kEn);
  IntermediateRepresentation e{QuestionStructure::kNormal,
                               {tup("Normal", "QU-who-what", "who", "collaborating", "enrico")}};
  auto a = e;
  EXPECT_TRUE(ir_matches(e, a, en));
  a.tuples[0].relation = "collaborating  with";
  EXPECT_TRUE(ir_matches(e, a, en));
  a.tuples[0].relation = "collaborating near";
  EXPECT_FALSE(ir_matches(e, a, en));
  a.tuples[0].relation = "collaborating with with";
  EXPECT_FALSE(ir_matches(e, a, en));
  // the allowance is one-sided
  auto with = e;
  with.tuples[0].relation = "collaborating with";
  EXPECT_FALSE(ir_matches(with, e, en));
  auto b = e;
  b.tuples[0].term2 = "Enrico";
  EXPECT_FALSE(ir_matches(e, b, en));
  b = e;
  b.structure = QuestionStructure::kUnknTerm;
  EXPECT_FALSE(ir_matches(e, b, en));
}
