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

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbqa/ir.hpp"
#include "kbqa/mapper.hpp"
#include "kbqa/ontology.hpp"

namespace kbqa::answer {

struct TupleAnswer {
  enum class Kind { kInstances, kValues, kBoolean, kCount };
  Kind kind = Kind::kInstances;
  std::set<std::string> items;
  bool truth = false;
  std::int64_t count = 0;
  std::vector<std::set<std::string>> groups;  // Combine only

  static TupleAnswer instances(std::set<std::string> s);
  static TupleAnswer values(std::set<std::string> s);
  static TupleAnswer boolean(bool b);
  static TupleAnswer counted(std::int64_t n);

  friend bool operator==(const TupleAnswer&, const TupleAnswer&) = default;
};

struct Comparison {
  enum class Op { kGt, kGe, kLt, kLe, kEq };
  Op op = Op::kEq;
  double value = 0;

  bool holds(double x) const;
};

/// Digits or a number word (English or Vietnamese).
std::optional<double> parse_number(std::string_view s);

/// Reads "more than three", "lớn hơn 45", ...; superlatives are unsupported.
Comparison parse_comparison(std::string_view payload,
                            std::optional<double> fallback = std::nullopt);

bool is_count_category(std::string_view category);
bool is_yesno_category(std::string_view category);

TupleAnswer answer_tuple(const mapping::OntologyTuple& t, const onto::Ontology& ont);

/// Combines per-tuple answers; Clause is handled by answer_ir.
TupleAnswer compose(QuestionStructure s, const std::vector<TupleAnswer>& parts);

TupleAnswer answer_ir(QuestionStructure s, const std::vector<mapping::OntologyTuple>& tuples,
                      const onto::Ontology& ont);

struct Answer {
  std::string kind;  // list | count | bool | values
  std::vector<std::string> items;
  std::vector<std::vector<std::string>> groups;
  std::string text;
  nlohmann::json provenance = nlohmann::json::array();
};

Answer render(std::string_view category, const TupleAnswer& result);

nlohmann::json to_json(const Answer& a);

}  // namespace kbqa::answer
