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

#include "kbqa/annotation.hpp"
#include "kbqa/error.hpp"

using kbqa::Document;
using kbqa::Span;

TEST(Document, OffsetsCountCodePoints) {
  Document d("Hà Nội ?");
  EXPECT_EQ(d.length(), 8u);
  auto id = d.add("TokenVn", {3, 6});
  EXPECT_EQ(d.covered_text(id), "Nội");
  EXPECT_EQ(d.substr({0, 2}), "Hà");
}

TEST(Document, RejectsBadSpans) {
  Document d("abc");
  EXPECT_THROW(d.add("X", {2, 1}), kbqa::RangeError);
  EXPECT_THROW(d.add("X", {0, 4}), kbqa::RangeError);
  EXPECT_THROW(d.get(99), kbqa::LookupError);
}

TEST(Document, TypeOrderIsStartThenLongest) {
  Document d("a b c");
  auto short_a = d.add("T", {0, 1});
  auto c = d.add("T", {4, 5});
  auto long_a = d.add("T", {0, 3});
  auto& v = d.of_type("T");
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0], long_a);
  EXPECT_EQ(v[1], short_a);
  EXPECT_EQ(v[2], c);
  EXPECT_TRUE(d.of_type("Missing").empty());
}

TEST(Document, StartingAtAndSkipSpace) {
  Document d("a  b");
  d.add("T", {0, 1});
  auto b = d.add("T", {3, 4});
  EXPECT_EQ(d.skip_space(1), 3u);
  EXPECT_EQ(d.skip_space(4), 4u);
  auto at = d.starting_at("T", 3);
  ASSERT_EQ(at.size(), 1u);
  EXPECT_EQ(at[0], b);
  EXPECT_EQ(d.starting_at(3).size(), 1u);
}

TEST(Document, FindWithinWithFeature) {
  Document d("Which projects");
  d.add("QuestionPhrase", {0, 14}, {{"category", "QU-whichClass"}});
  d.add("QuestionPhrase", {0, 5}, {{"category", "QU-who-what"}});
  EXPECT_EQ(d.find_within({0, 14}, "QuestionPhrase").size(), 2u);
  EXPECT_EQ(d.find_within({0, 14}, "QuestionPhrase",
                          kbqa::FeatureConstraint{"category", "QU-whichClass"}).size(), 1u);
  EXPECT_TRUE(d.find_within({6, 14}, "QuestionPhrase").empty());
}

TEST(Document, FeaturesAndJsonRoundTrip) {
  Document d("Ai ?");
  auto id = d.add("TokenVn", {0, 2}, {{"category", "P"}});
  d.set_feature(id, "question-word", "Who");
  EXPECT_EQ(*d.get(id).feature("question-word"), "Who");
  EXPECT_FALSE(d.get(id).feature("missing").has_value());
  auto copy = Document::from_json(d.to_json());
  EXPECT_EQ(copy.text(), d.text());
  ASSERT_EQ(copy.size(), 1u);
  EXPECT_EQ(copy.get(id).features, d.get(id).features);
  EXPECT_EQ(copy.get(id).span, (Span{0, 2}));
}
