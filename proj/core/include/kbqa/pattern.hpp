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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kbqa/annotation.hpp"

namespace kbqa::pattern {

enum class Quant { kOne, kOptional, kPlus, kStar };

/// `Type` or `Type.feature == value`. The pseudo-feature `string` tests the
/// covered text (case-insensitive, whitespace-normalized).
struct TypeExpr {
  std::string type;
  std::optional<FeatureConstraint> test;

  friend bool operator==(const TypeExpr&, const TypeExpr&) = default;
};

struct Node {
  enum class Kind { kTest, kSeq, kAlt, kGroup };

  Kind kind = Kind::kSeq;
  std::vector<TypeExpr> tests;   // kTest: disjunction inside one brace pair
  std::vector<Node> children;    // kSeq, kAlt; kGroup has exactly one
  std::string label;             // kGroup, may be empty
  Quant quant = Quant::kOne;

  static Node test(std::vector<TypeExpr> alternatives, Quant q = Quant::kOne);
  static Node seq(std::vector<Node> items);
  static Node alt(std::vector<Node> options);
  static Node group(Node body, std::string label = {}, Quant q = Quant::kOne);

  friend bool operator==(const Node&, const Node&) = default;
};

struct Posting {
  std::string label;
  std::string type;
  FeatureMap features;

  friend bool operator==(const Posting&, const Posting&) = default;
};

struct Rule {
  Node root;  // always a labeled kGroup once parsed
  std::vector<Posting> postings;

  const std::string& outer_label() const { return root.label; }
  friend bool operator==(const Rule&, const Rule&) = default;
};

/// `Subject.hasAnno == Contained[.feature == value]`
struct ExtraConstraint {
  std::string subject;
  std::string contained;
  std::optional<FeatureConstraint> test;

  friend bool operator==(const ExtraConstraint&, const ExtraConstraint&) = default;
};

struct MatchResult {
  Span span;
  std::map<std::string, Span> bindings;
  std::vector<AnnotationId> posted;
};

/// Parses `condition --> posting, ...`. Throws ParseError on syntax errors
/// and ValidationError on label problems.
Rule parse_rule(std::string_view source);
/// Parses a bare condition (no postings); the outer label is still required.
Node parse_condition(std::string_view source);
ExtraConstraint parse_extra(std::string_view source);

/// Canonical single-line text; parse_rule(to_text(r)) == r.
std::string to_text(const Rule& rule);
std::string to_text(const Node& node);
std::string to_text(const ExtraConstraint& extra);

/// Every label in the pattern, in document order.
std::vector<std::string> labels(const Node& node);

bool test_matches(const Document& doc, const Annotation& a, const TypeExpr& e);

/// End offsets the node can reach starting at `start`.
std::set<std::size_t> reachable(const Document& doc, const Node& node, std::size_t start);

/// Region matched when the pattern must cover the whole question: it starts
/// at the first base annotation and reaches the last non-punctuation base
/// annotation. The longest admissible end wins.
std::optional<Span> anchored_span(const Document& doc, const Node& node,
                                  std::string_view base_type);
/// Leftmost start, then longest end; empty matches are ignored.
std::optional<Span> anywhere_span(const Document& doc, const Node& node);

/// Binds labels for a match of exactly `span` and posts the rule's
/// annotations. `span` must be reachable.
MatchResult apply(Document& doc, const Rule& rule, Span span);

std::optional<MatchResult> match_anchored(Document& doc, const Rule& rule,
                                          std::string_view base_type);
std::optional<MatchResult> match_anywhere(Document& doc, const Rule& rule);

bool check_extra(const Document& doc, const MatchResult& match,
                 const ExtraConstraint& constraint);

}  // namespace kbqa::pattern
