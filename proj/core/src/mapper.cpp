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

#include "kbqa/mapper.hpp"

#include <algorithm>

#include "kbqa/error.hpp"
#include "kbqa/text.hpp"

namespace kbqa::mapping {

std::string to_string(ElementKind k) {
  switch (k) {
    case ElementKind::kConcept: return "concept";
    case ElementKind::kInstance: return "instance";
    case ElementKind::kRelation: return "relation";
    case ElementKind::kLiteral: return "literal";
  }
  return "?";
}

std::string to_string(SlotName s) {
  switch (s) {
    case SlotName::kTerm1: return "term1";
    case SlotName::kRelation: return "relation";
    case SlotName::kTerm2: return "term2";
    case SlotName::kTerm3: return "term3";
  }
  return "?";
}

double similarity(std::string_view a, std::string_view b) {
  auto fa = text::decode(text::key(a));
  auto fb = text::decode(text::key(b));
  std::size_t m = std::max(fa.size(), fb.size());
  if (m == 0) return 1.0;
  return 1.0 - static_cast<double>(text::edit_distance(fa, fb)) / static_cast<double>(m);
}

MapperConfig MapperConfig::for_language(Language lang) {
  MapperConfig c;
  c.prepositions = SurfaceTrim::for_language(lang).prepositions;
  if (lang == Language::kVi) c.stop_words = {"tất cả", "các", "những", "mọi"};
  else c.stop_words = {"all", "the", "a", "an", "some"};
  return c;
}

namespace {

bool is_literal(std::string_view s) {
  auto cps = text::decode(text::normalize_space(s));
  if (cps.empty()) return false;
  bool digit = false;
  for (char32_t c : cps) {
    if (text::is_digit(c)) digit = true;
    else if (c != U'.' && c != U',') return false;
  }
  return digit;
}

// Longest phrase from `phrases` that is a word prefix of `words`, as a word count.
std::size_t prefix_words(const std::vector<std::string>& words, const std::vector<std::string>& phrases) {
  std::size_t best = 0;
  for (const auto& p : phrases) {
    auto pw = text::split_words(text::key(p));
    if (pw.empty() || pw.size() > words.size() || pw.size() <= best) continue;
    bool ok = true;
    for (std::size_t i = 0; i < pw.size() && ok; ++i) ok = text::fold(words[i]) == pw[i];
    if (ok) best = pw.size();
  }
  return best;
}

std::string drop_front(const std::vector<std::string>& w, std::size_t n) {
  return text::join(std::vector<std::string>(w.begin() + static_cast<long>(n), w.end()));
}

std::vector<std::string> concept_heads(const onto::Ontology& ont) {
  std::vector<std::string> heads;
  for (const auto& c : ont.concepts()) {
    heads.push_back(c.name);
    heads.insert(heads.end(), c.synonyms.begin(), c.synonyms.end());
  }
  return heads;
}

// Strips a leading concept name, keeping at least one word.
std::optional<std::string> head_stripped(std::string_view s, const std::vector<std::string>& heads) {
  auto w = text::split_words(s);
  std::size_t n = prefix_words(w, heads);
  if (n == 0 || n >= w.size()) return std::nullopt;
  return drop_front(w, n);
}

struct Names {
  std::string name;
  std::vector<std::string> forms;  // name + synonyms
};

std::vector<Names> pool_of(ElementKind kind, const onto::Ontology& ont, const onto::NameSet* among) {
  std::vector<Names> out;
  auto keep = [&](const std::string& n) { return !among || among->count(n); };
  auto push = [&](const std::string& n, const std::vector<std::string>& syn) {
    if (!keep(n)) return;
    Names x{n, {n}};
    x.forms.insert(x.forms.end(), syn.begin(), syn.end());
    out.push_back(std::move(x));
  };
  switch (kind) {
    case ElementKind::kConcept:
      for (const auto& c : ont.concepts()) push(c.name, c.synonyms);
      break;
    case ElementKind::kInstance:
      for (const auto& i : ont.instances()) push(i.name, i.synonyms);
      break;
    case ElementKind::kRelation:
      for (const auto& r : ont.relations()) push(r.name, r.synonyms);
      break;
    case ElementKind::kLiteral:
      break;
  }
  return out;
}

bool better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  auto la = text::length(a.name), lb = text::length(b.name);
  if (la != lb) return la < lb;
  return a.name < b.name;
}

}  // namespace

MappingResult map_term(std::string_view term, ElementKind kind, const onto::Ontology& ont,
                       const MapperConfig& cfg, const onto::NameSet* among) {
  MappingResult res;
  std::string full = text::normalize_space(term);
  if (full.empty() || kind == ElementKind::kLiteral) return res;

  std::vector<std::string> direct{full};
  auto words = text::split_words(full);
  if (std::size_t n = prefix_words(words, cfg.stop_words); n > 0 && n < words.size()) {
    words = text::split_words(drop_front(words, n));
    direct.push_back(text::join(words));
  }
  if (kind == ElementKind::kRelation && words.size() > 1 &&
      std::find(cfg.prepositions.begin(), cfg.prepositions.end(), text::fold(words.back())) !=
          cfg.prepositions.end()) {
    words.pop_back();
    direct.push_back(text::join(words));
  }
  std::vector<std::string> heads;
  std::optional<std::string> term_head;
  if (kind != ElementKind::kRelation) {
    heads = concept_heads(ont);
    term_head = head_stripped(direct.back(), heads);
  }

  auto pool = pool_of(kind, ont, among);
  std::vector<Candidate> exact, scored;
  for (const auto& e : pool) {
    bool hit = false;
    for (const auto& d : direct) {
      for (const auto& f : e.forms) hit = hit || text::key(d) == text::key(f);
    }
    if (hit) {
      exact.push_back({e.name, 1.0});
      continue;
    }
    double best = 0;
    for (const auto& f : e.forms) {
      for (const auto& d : direct) best = std::max(best, similarity(d, f));
      if (term_head) best = std::max(best, similarity(*term_head, f));
    }
    if (kind == ElementKind::kInstance) {
      if (auto eh = head_stripped(e.name, heads)) {
        for (const auto& d : direct) best = std::max(best, similarity(d, *eh));
      }
    }
    if (best >= cfg.threshold) scored.push_back({e.name, best});
  }
  if (!exact.empty()) {
    std::sort(exact.begin(), exact.end(), better);
    res.kind = exact.size() == 1 ? MappingResult::Kind::kExact : MappingResult::Kind::kCandidates;
    res.candidates = std::move(exact);
    return res;
  }
  if (scored.empty()) return res;
  std::sort(scored.begin(), scored.end(), better);
  res.kind = MappingResult::Kind::kCandidates;
  res.candidates = std::move(scored);
  return res;
}

nlohmann::json to_json(const OntologyTuple& t) {
  auto el = [](const std::optional<Element>& e) {
    return e ? nlohmann::json{{"name", e->name}, {"kind", to_string(e->kind)}} : nlohmann::json(nullptr);
  };
  auto s = [](const std::optional<std::string>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"sub", to_string(t.sub)}, {"cat", t.category}, {"term1", el(t.term1)},
          {"relation", s(t.relation)}, {"term2", el(t.term2)}, {"term3", s(t.term3)},
          {"term3_element", el(t.term3_element)}};
}

nlohmann::json to_json(const PendingChoice& p) {
  return {{"choice_id", p.choice_id}, {"tuple", p.tuple}, {"slot", to_string(p.slot)},
          {"term", p.term}, {"candidates", p.candidates}, {"context", p.context}};
}

namespace {

struct Pending {
  PendingChoice choice;
};

// Picks one name from a mapping result, consulting recorded choices.
std::optional<std::string> settle(const MappingResult& r, SlotName slot, std::size_t index,
                                  const std::string& term, const QueryTuple& t,
                                  const Choices& choices) {
  if (r.none()) return std::nullopt;
  if (auto it = choices.find({index, slot}); it != choices.end()) return it->second;
  if (r.candidates.size() == 1) return r.candidates.front().name;
  PendingChoice p;
  p.choice_id = "t" + std::to_string(index) + "-" + to_string(slot);
  p.tuple = index;
  p.slot = slot;
  p.term = term;
  for (const auto& c : r.candidates) p.candidates.push_back(c.name);
  p.context = to_text(t);
  throw Pending{std::move(p)};
}

std::optional<Element> map_entity(const std::string& term, SlotName slot, std::size_t index,
                                  const QueryTuple& t, const onto::Ontology& ont,
                                  const MapperConfig& cfg, const Choices& choices,
                                  ElementKind first, ElementKind second) {
  if (is_literal(term)) return Element{text::normalize_space(term), ElementKind::kLiteral};
  for (ElementKind k : {first, second}) {
    auto r = map_term(term, k, ont, cfg);
    if (auto name = settle(r, slot, index, term, t, choices)) return Element{*name, k};
  }
  return std::nullopt;
}

}  // namespace

TupleMapping map_query_tuple(const QueryTuple& t, std::size_t index, const onto::Ontology& ont,
                             const MapperConfig& cfg, const Choices& choices) {
  auto sub = parse_structure(t.sub);
  if (!sub) throw ValidationError("unknown sub-structure '" + t.sub + "'");
  OntologyTuple out;
  out.sub = *sub;
  out.category = t.category;
  try {
    if (t.term1) {
      out.term1 = map_entity(*t.term1, SlotName::kTerm1, index, t, ont, cfg, choices,
                             ElementKind::kConcept, ElementKind::kInstance);
      if (!out.term1) throw MappingError("term1", *t.term1);
    }
    if (t.term2) {
      out.term2 = map_entity(*t.term2, SlotName::kTerm2, index, t, ont, cfg, choices,
                             ElementKind::kInstance, ElementKind::kConcept);
      if (!out.term2) throw MappingError("term2", *t.term2);
    }
    if (t.term3) {
      out.term3 = text::normalize_space(*t.term3);
      if (*sub != QuestionStructure::kCompare) {
        out.term3_element = map_entity(*t.term3, SlotName::kTerm3, index, t, ont, cfg, choices,
                                       ElementKind::kInstance, ElementKind::kConcept);
      }
    }

    auto element = [](const std::optional<Element>& e) {
      return e && e->kind != ElementKind::kLiteral ? &e->name : nullptr;
    };
    const std::string* e1 = element(out.term1);
    const std::string* e2 = element(out.term2);
    onto::NameSet pool;
    if (e1 && e2) pool = ont.relations_between(*e1, *e2);
    else if (e2) pool = ont.relations_touching(*e2);
    else if (e1) pool = ont.relations_touching(*e1);

    if (t.relation) {
      MappingResult r = map_term(*t.relation, ElementKind::kRelation, ont, cfg,
                                 pool.empty() ? nullptr : &pool);
      if (r.none() && !pool.empty()) r = map_term(*t.relation, ElementKind::kRelation, ont, cfg);
      out.relation = settle(r, SlotName::kRelation, index, *t.relation, t, choices);
      if (!out.relation) throw MappingError("relation", *t.relation);
    } else if (*sub == QuestionStructure::kUnknRel && e1 && e2 && !pool.empty()) {
      MappingResult r;
      r.kind = pool.size() == 1 ? MappingResult::Kind::kExact : MappingResult::Kind::kCandidates;
      for (const auto& name : pool) r.candidates.push_back({name, 1.0});
      std::sort(r.candidates.begin(), r.candidates.end(), better);
      out.relation = settle(r, SlotName::kRelation, index, "", t, choices);
    }
  } catch (Pending& p) {
    return std::move(p.choice);
  }
  return out;
}

IrMapping map_ir(const IntermediateRepresentation& ir, const onto::Ontology& ont,
                 const MapperConfig& cfg, const Choices& choices) {
  std::vector<OntologyTuple> out;
  for (std::size_t i = 0; i < ir.tuples.size(); ++i) {
    auto m = map_query_tuple(ir.tuples[i], i, ont, cfg, choices);
    if (auto* p = std::get_if<PendingChoice>(&m)) return std::move(*p);
    out.push_back(std::get<OntologyTuple>(std::move(m)));
  }
  return out;
}

void resolve_choice(const PendingChoice& pending, std::string_view selection, Choices& choices) {
  auto it = std::find(pending.candidates.begin(), pending.candidates.end(), selection);
  if (it == pending.candidates.end()) {
    throw ValidationError("'" + std::string(selection) + "' is not one of the offered candidates");
  }
  choices[pending.key()] = *it;
}

}  // namespace kbqa::mapping
