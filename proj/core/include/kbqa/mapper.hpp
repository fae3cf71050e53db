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
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "kbqa/ir.hpp"
#include "kbqa/language.hpp"
#include "kbqa/ontology.hpp"

namespace kbqa::mapping {

enum class ElementKind { kConcept, kInstance, kRelation, kLiteral };

std::string to_string(ElementKind k);

/// 1 - lev(fold a, fold b) / max length; both empty gives 1.
double similarity(std::string_view a, std::string_view b);

struct Candidate {
  std::string name;
  double score = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct MappingResult {
  enum class Kind { kExact, kCandidates, kNoMatch };
  Kind kind = Kind::kNoMatch;
  std::vector<Candidate> candidates;  // kExact: the single element, score 1

  bool exact() const noexcept { return kind == Kind::kExact; }
  bool none() const noexcept { return kind == Kind::kNoMatch; }
};

struct MapperConfig {
  double threshold = 0.8;
  std::vector<std::string> stop_words;
  std::vector<std::string> prepositions;

  static MapperConfig for_language(Language lang);
};

/// `among` restricts the element pool (names); null means every element of the kind.
MappingResult map_term(std::string_view term, ElementKind kind, const onto::Ontology& ont,
                       const MapperConfig& cfg, const onto::NameSet* among = nullptr);

struct Element {
  std::string name;
  ElementKind kind = ElementKind::kInstance;

  friend bool operator==(const Element&, const Element&) = default;
};

struct OntologyTuple {
  QuestionStructure sub = QuestionStructure::kNormal;
  std::string category;
  std::optional<Element> term1;
  std::optional<std::string> relation;
  std::optional<Element> term2;
  std::optional<std::string> term3;  // raw payload
  std::optional<Element> term3_element;

  friend bool operator==(const OntologyTuple&, const OntologyTuple&) = default;
};

nlohmann::json to_json(const OntologyTuple& t);

enum class SlotName { kTerm1, kRelation, kTerm2, kTerm3 };
std::string to_string(SlotName s);

using ChoiceKey = std::pair<std::size_t, SlotName>;
using Choices = std::map<ChoiceKey, std::string>;

struct PendingChoice {
  std::string choice_id;
  std::size_t tuple = 0;
  SlotName slot = SlotName::kTerm1;
  std::string term;  // text being mapped
  std::vector<std::string> candidates;
  std::string context;

  ChoiceKey key() const { return {tuple, slot}; }
};

nlohmann::json to_json(const PendingChoice& p);

using TupleMapping = std::variant<OntologyTuple, PendingChoice>;
using IrMapping = std::variant<std::vector<OntologyTuple>, PendingChoice>;

TupleMapping map_query_tuple(const QueryTuple& t, std::size_t index, const onto::Ontology& ont,
                             const MapperConfig& cfg, const Choices& choices = {});

IrMapping map_ir(const IntermediateRepresentation& ir, const onto::Ontology& ont,
                 const MapperConfig& cfg, const Choices& choices = {});

/// Records a user's selection; rejects names that were not offered.
void resolve_choice(const PendingChoice& pending, std::string_view selection, Choices& choices);

}  // namespace kbqa::mapping
