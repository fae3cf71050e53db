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

#include "kbqa/ontology.hpp"

#include <fstream>

#include "kbqa/error.hpp"

namespace kbqa::onto {

Ontology::Ontology(std::vector<Concept> concepts, std::vector<RelationDef> relations,
                   std::vector<Instance> instances, std::vector<Assertion> assertions)
    : concepts_(std::move(concepts)), relations_(std::move(relations)),
      instances_(std::move(instances)), assertions_(std::move(assertions)) {
  validate_and_index();
}

void Ontology::validate_and_index() {
  for (std::size_t i = 0; i < concepts_.size(); ++i) {
    if (concepts_[i].name.empty()) throw ValidationError("concept with empty name");
    if (!concept_ix_.emplace(concepts_[i].name, i).second) {
      throw ValidationError("duplicate concept '" + concepts_[i].name + "'");
    }
  }
  for (const auto& c : concepts_) {
    if (!c.parent) continue;
    if (!concept_ix_.count(*c.parent)) {
      throw ValidationError("concept '" + c.name + "' has unknown parent '" + *c.parent + "'");
    }
    children_[*c.parent].push_back(c.name);
  }
  for (const auto& c : concepts_) {
    std::set<std::string> seen{c.name};
    const Concept* cur = &c;
    while (cur->parent) {
      if (!seen.insert(*cur->parent).second) {
        throw ValidationError("concept hierarchy cycle through '" + c.name + "'");
      }
      cur = &concepts_[concept_ix_.at(*cur->parent)];
    }
  }
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    if (!relation_ix_.emplace(relations_[i].name, i).second) {
      throw ValidationError("duplicate relation '" + relations_[i].name + "'");
    }
  }
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    const auto& in = instances_[i];
    if (!instance_ix_.emplace(in.name, i).second) {
      throw ValidationError("duplicate instance '" + in.name + "'");
    }
    if (in.concepts.empty()) throw ValidationError("instance '" + in.name + "' has no concept");
    for (const auto& c : in.concepts) {
      if (!concept_ix_.count(c)) {
        throw ValidationError("instance '" + in.name + "' member of unknown concept '" + c + "'");
      }
    }
  }
  for (const auto& a : assertions_) require_declared(a);
}

const Assertion* Ontology::require_declared(const Assertion& a) const {
  std::string what = "assertion (" + a.s + ", " + a.r + ", " + a.o + ")";
  if (!instance_ix_.count(a.s)) throw ValidationError(what + ": undeclared subject '" + a.s + "'");
  auto r = relation_ix_.find(a.r);
  if (r == relation_ix_.end()) throw ValidationError(what + ": undeclared relation '" + a.r + "'");
  if (relations_[r->second].kind == RelationKind::kObject && !instance_ix_.count(a.o)) {
    throw ValidationError(what + ": undeclared object '" + a.o + "'");
  }
  return &a;
}

namespace {

std::vector<std::string> strings(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return {};
  return j.at(key).get<std::vector<std::string>>();
}

}  // namespace

Ontology Ontology::from_json(const nlohmann::json& j) {
  std::vector<Concept> concepts;
  std::vector<RelationDef> relations;
  std::vector<Instance> instances;
  std::vector<Assertion> assertions;
  try {
    for (const auto& c : j.value("concepts", nlohmann::json::array())) {
      Concept x{c.at("name").get<std::string>(), strings(c, "synonyms"), std::nullopt};
      if (c.contains("parent") && !c.at("parent").is_null()) x.parent = c.at("parent").get<std::string>();
      concepts.push_back(std::move(x));
    }
    for (const auto& r : j.value("relations", nlohmann::json::array())) {
      std::string kind = r.value("kind", "object");
      if (kind != "object" && kind != "datatype") {
        throw ValidationError("relation '" + r.at("name").get<std::string>() + "' has kind '" + kind + "'");
      }
      relations.push_back({r.at("name").get<std::string>(), strings(r, "synonyms"),
                           kind == "object" ? RelationKind::kObject : RelationKind::kDatatype});
    }
    for (const auto& i : j.value("instances", nlohmann::json::array())) {
      instances.push_back({i.at("name").get<std::string>(), strings(i, "synonyms"), strings(i, "concepts")});
    }
    for (const auto& a : j.value("assertions", nlohmann::json::array())) {
      const auto& o = a.at("o");
      assertions.push_back({a.at("s").get<std::string>(), a.at("r").get<std::string>(),
                            o.is_string() ? o.get<std::string>() : o.dump()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed ontology: ") + e.what());
  }
  return Ontology(std::move(concepts), std::move(relations), std::move(instances),
                  std::move(assertions));
}

Ontology Ontology::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LookupError("cannot open ontology " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError::located(path.string(), e.what(), 0, static_cast<int>(e.byte));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

nlohmann::json Ontology::to_json() const {
  nlohmann::json j = {{"concepts", nlohmann::json::array()},
                      {"relations", nlohmann::json::array()},
                      {"instances", nlohmann::json::array()},
                      {"assertions", nlohmann::json::array()}};
  for (const auto& c : concepts_) {
    j["concepts"].push_back({{"name", c.name}, {"synonyms", c.synonyms},
                             {"parent", c.parent ? nlohmann::json(*c.parent) : nlohmann::json(nullptr)}});
  }
  for (const auto& r : relations_) {
    j["relations"].push_back({{"name", r.name}, {"synonyms", r.synonyms},
                              {"kind", r.kind == RelationKind::kObject ? "object" : "datatype"}});
  }
  for (const auto& i : instances_) {
    j["instances"].push_back({{"name", i.name}, {"synonyms", i.synonyms}, {"concepts", i.concepts}});
  }
  for (const auto& a : assertions_) j["assertions"].push_back({{"s", a.s}, {"r", a.r}, {"o", a.o}});
  return j;
}

const Concept* Ontology::concept_named(std::string_view name) const {
  auto it = concept_ix_.find(name);
  return it == concept_ix_.end() ? nullptr : &concepts_[it->second];
}

const Instance* Ontology::instance_named(std::string_view name) const {
  auto it = instance_ix_.find(name);
  return it == instance_ix_.end() ? nullptr : &instances_[it->second];
}

const RelationDef* Ontology::relation_named(std::string_view name) const {
  auto it = relation_ix_.find(name);
  return it == relation_ix_.end() ? nullptr : &relations_[it->second];
}

NameSet Ontology::instances_of(std::string_view concept_name, bool transitive) const {
  if (!concept_named(concept_name)) {
    throw LookupError("unknown concept '" + std::string(concept_name) + "'");
  }
  NameSet wanted{std::string(concept_name)};
  if (transitive) {
    std::vector<std::string> stack{std::string(concept_name)};
    while (!stack.empty()) {
      auto c = stack.back();
      stack.pop_back();
      auto it = children_.find(c);
      if (it == children_.end()) continue;
      for (const auto& k : it->second) {
        if (wanted.insert(k).second) stack.push_back(k);
      }
    }
  }
  NameSet out;
  for (const auto& in : instances_) {
    for (const auto& c : in.concepts) {
      if (wanted.count(c)) {
        out.insert(in.name);
        break;
      }
    }
  }
  return out;
}

NameSet Ontology::concepts_of(std::string_view instance) const {
  const Instance* in = instance_named(instance);
  if (!in) throw LookupError("unknown instance '" + std::string(instance) + "'");
  NameSet out;
  for (const auto& c : in->concepts) {
    const Concept* cur = concept_named(c);
    while (cur && out.insert(cur->name).second) {
      cur = cur->parent ? concept_named(*cur->parent) : nullptr;
    }
  }
  return out;
}

bool Ontology::is_a(std::string_view instance, std::string_view concept_name) const {
  return concepts_of(instance).count(std::string(concept_name)) != 0;
}

bool Ontology::compatible(std::string_view element, std::string_view name) const {
  if (element == name && instance_named(element)) return true;
  if (concept_named(element) && instance_named(name)) return is_a(name, element);
  return false;
}

NameSet Ontology::relations_between(std::string_view a, std::string_view b) const {
  for (auto x : {a, b}) {
    if (!concept_named(x) && !instance_named(x)) {
      throw LookupError("unknown ontology element '" + std::string(x) + "'");
    }
  }
  NameSet out;
  for (const auto& as : assertions_) {
    if ((compatible(a, as.s) && compatible(b, as.o)) || (compatible(b, as.s) && compatible(a, as.o))) {
      out.insert(as.r);
    }
  }
  return out;
}

NameSet Ontology::relations_touching(std::string_view a) const {
  if (!concept_named(a) && !instance_named(a)) {
    throw LookupError("unknown ontology element '" + std::string(a) + "'");
  }
  NameSet out;
  for (const auto& as : assertions_) {
    if (compatible(a, as.s) || compatible(a, as.o)) out.insert(as.r);
  }
  return out;
}

NameSet Ontology::query_assertions(std::string_view subject_concept, std::string_view relation,
                                   std::string_view object) const {
  if (!relation_named(relation)) throw LookupError("unknown relation '" + std::string(relation) + "'");
  if (!instance_named(object)) throw LookupError("unknown instance '" + std::string(object) + "'");
  NameSet members = instances_of(subject_concept, true);
  NameSet out;
  for (const auto& a : assertions_) {
    if (a.r == relation && a.o == object && members.count(a.s)) out.insert(a.s);
  }
  return out;
}

NameSet Ontology::subjects(std::string_view relation, std::string_view object) const {
  NameSet out;
  for (const auto& a : assertions_) {
    if (a.r == relation && a.o == object) out.insert(a.s);
  }
  return out;
}

std::vector<std::string> Ontology::objects(std::string_view subject, std::string_view relation) const {
  std::vector<std::string> out;
  for (const auto& a : assertions_) {
    if (a.s == subject && a.r == relation) out.push_back(a.o);
  }
  return out;
}

}  // namespace kbqa::onto
