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

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace kbqa::onto {

enum class RelationKind { kObject, kDatatype };

struct Concept {
  std::string name;
  std::vector<std::string> synonyms;
  std::optional<std::string> parent;
};

struct Instance {
  std::string name;
  std::vector<std::string> synonyms;
  std::vector<std::string> concepts;
};

struct RelationDef {
  std::string name;
  std::vector<std::string> synonyms;
  RelationKind kind = RelationKind::kObject;
};

struct Assertion {
  std::string s;
  std::string r;
  std::string o;

  friend bool operator==(const Assertion&, const Assertion&) = default;
};

using NameSet = std::set<std::string>;

class Ontology {
 public:
  Ontology() = default;
  Ontology(std::vector<Concept> concepts, std::vector<RelationDef> relations,
           std::vector<Instance> instances, std::vector<Assertion> assertions);

  static Ontology from_json(const nlohmann::json& j);
  static Ontology load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  const std::vector<Concept>& concepts() const noexcept { return concepts_; }
  const std::vector<RelationDef>& relations() const noexcept { return relations_; }
  const std::vector<Instance>& instances() const noexcept { return instances_; }
  const std::vector<Assertion>& assertions() const noexcept { return assertions_; }

  const Concept* concept_named(std::string_view name) const;
  const Instance* instance_named(std::string_view name) const;
  const RelationDef* relation_named(std::string_view name) const;

  NameSet instances_of(std::string_view concept_name, bool transitive = true) const;
  /// Concepts an instance belongs to, with their ancestors.
  NameSet concepts_of(std::string_view instance) const;
  bool is_a(std::string_view instance, std::string_view concept_name) const;

  /// Relations linking a and b, in either direction.
  NameSet relations_between(std::string_view a, std::string_view b) const;
  /// Relations with any assertion touching a.
  NameSet relations_touching(std::string_view a) const;

  NameSet query_assertions(std::string_view subject_concept, std::string_view relation,
                           std::string_view object) const;
  NameSet subjects(std::string_view relation, std::string_view object) const;
  std::vector<std::string> objects(std::string_view subject, std::string_view relation) const;

 private:
  void validate_and_index();
  bool compatible(std::string_view element, std::string_view name) const;
  const Assertion* require_declared(const Assertion& a) const;

  std::vector<Concept> concepts_;
  std::vector<RelationDef> relations_;
  std::vector<Instance> instances_;
  std::vector<Assertion> assertions_;
  std::map<std::string, std::size_t, std::less<>> concept_ix_;
  std::map<std::string, std::size_t, std::less<>> instance_ix_;
  std::map<std::string, std::size_t, std::less<>> relation_ix_;
  std::map<std::string, std::vector<std::string>, std::less<>> children_;
};

}  // namespace kbqa::onto
