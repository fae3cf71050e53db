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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbqa/annotation.hpp"
#include "kbqa/error.hpp"
#include "kbqa/language.hpp"

namespace kbqa {

enum class QuestionStructure {
  kNormal,
  kUnknTerm,
  kUnknRel,
  kDefinition,
  kCompare,
  kThreeTerm,
  kClause,
  kCombine,
  kAnd,
  kOr,
  kAffirmMoreTuples,
  kAffirm,
  kAffirm3Term,
};

inline constexpr std::array<QuestionStructure, 13> kAllStructures = {
    QuestionStructure::kNormal,   QuestionStructure::kUnknTerm,
    QuestionStructure::kUnknRel,  QuestionStructure::kDefinition,
    QuestionStructure::kCompare,  QuestionStructure::kThreeTerm,
    QuestionStructure::kClause,   QuestionStructure::kCombine,
    QuestionStructure::kAnd,      QuestionStructure::kOr,
    QuestionStructure::kAffirmMoreTuples, QuestionStructure::kAffirm,
    QuestionStructure::kAffirm3Term,
};

std::string to_string(QuestionStructure s);
std::optional<QuestionStructure> parse_structure(std::string_view name);
/// Structures carrying exactly one tuple.
bool is_simple(QuestionStructure s);

/// Question categories of both registries.
const std::vector<std::string>& category_registry(Language lang);
bool is_known_category(std::string_view label);

struct QueryTuple {
  std::string sub;  // QuestionStructure name
  std::string category;
  std::optional<std::string> term1;
  std::optional<std::string> relation;
  std::optional<std::string> term2;
  std::optional<std::string> term3;

  friend bool operator==(const QueryTuple&, const QueryTuple&) = default;
};

struct IntermediateRepresentation {
  QuestionStructure structure = QuestionStructure::kNormal;
  std::vector<QueryTuple> tuples;

  friend bool operator==(const IntermediateRepresentation&,
                         const IntermediateRepresentation&) = default;
};

nlohmann::json to_json(const QueryTuple& t);
nlohmann::json to_json(const IntermediateRepresentation& ir);
IntermediateRepresentation ir_from_json(const nlohmann::json& j);
/// `(sub, cat, t1, rel, t2, t3)` with `?` for absent slots.
std::string to_text(const QueryTuple& t);
std::string to_text(const IntermediateRepresentation& ir);

std::vector<std::string> validate_ir(const IntermediateRepresentation& ir);

/// One slot of a conclusion tuple, written as in rule conclusions:
///   `?`                absent
///   `X`                text covered by the posted annotation X
///   `X.f`              feature f of the posted annotation X
///   `X.T.f`            feature f of the T annotation co-extensive with X
struct Slot {
  enum class Kind { kAbsent, kCoveredText, kStructureFeature, kFeatureOf };
  Kind kind = Kind::kAbsent;
  std::string type;
  std::string colocated;
  std::string feature;

  static Slot parse(std::string_view text);
  std::string to_text() const;
  friend bool operator==(const Slot&, const Slot&) = default;
};

struct ConclusionTemplate {
  QuestionStructure structure = QuestionStructure::kNormal;
  std::vector<std::array<Slot, 6>> tuples;

  friend bool operator==(const ConclusionTemplate&, const ConclusionTemplate&) = default;
};

nlohmann::json to_json(const ConclusionTemplate& t);
ConclusionTemplate template_from_json(const nlohmann::json& j);
/// Every annotation type the template reads.
std::vector<std::string> referenced_types(const ConclusionTemplate& t);

/// Function words stripped from the edges of slot strings.
struct SurfaceTrim {
  std::vector<std::string> term_prefixes;
  std::vector<std::string> term_suffixes;
  std::vector<std::string> relation_prefixes;
  std::vector<std::string> prepositions;

  static const SurfaceTrim& for_language(Language lang);
  static const SurfaceTrim& none();

  std::string term(std::string_view s) const;
  std::string relation(std::string_view s) const;
};

class InstantiationError : public Error {
 public:
  using Error::Error;
};

/// Reads the most recently posted annotation of each referenced type.
/// Throws InstantiationError naming the slot when something is missing.
IntermediateRepresentation instantiate(const ConclusionTemplate& t, const Document& doc,
                                       const SurfaceTrim& trim = SurfaceTrim::none());

/// Exact tuple equality after whitespace normalization, except that an
/// actual relation may carry one extra trailing preposition.
bool ir_matches(const IntermediateRepresentation& expected,
                const IntermediateRepresentation& actual, const SurfaceTrim& trim);

}  // namespace kbqa
