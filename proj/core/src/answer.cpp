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

#include "kbqa/answer.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "kbqa/error.hpp"
#include "kbqa/text.hpp"

namespace kbqa::answer {

using mapping::Element;
using mapping::ElementKind;
using mapping::OntologyTuple;

TupleAnswer TupleAnswer::instances(std::set<std::string> s) {
  TupleAnswer a;
  a.items = std::move(s);
  return a;
}

TupleAnswer TupleAnswer::values(std::set<std::string> s) {
  TupleAnswer a;
  a.kind = Kind::kValues;
  a.items = std::move(s);
  return a;
}

TupleAnswer TupleAnswer::boolean(bool b) {
  TupleAnswer a;
  a.kind = Kind::kBoolean;
  a.truth = b;
  return a;
}

TupleAnswer TupleAnswer::counted(std::int64_t n) {
  TupleAnswer a;
  a.kind = Kind::kCount;
  a.count = n;
  return a;
}

bool Comparison::holds(double x) const {
  switch (op) {
    case Op::kGt: return x > value;
    case Op::kGe: return x >= value;
    case Op::kLt: return x < value;
    case Op::kLe: return x <= value;
    case Op::kEq: return x == value;
  }
  return false;
}

namespace {

struct Word {
  const char* text;
  double value;
};

constexpr std::array<Word, 39> kNumberWords = {{
    {"zero", 0},      {"one", 1},        {"two", 2},       {"three", 3},    {"four", 4},
    {"five", 5},      {"six", 6},        {"seven", 7},     {"eight", 8},    {"nine", 9},
    {"ten", 10},      {"eleven", 11},    {"twelve", 12},   {"thirteen", 13}, {"fourteen", 14},
    {"fifteen", 15},  {"sixteen", 16},   {"seventeen", 17}, {"eighteen", 18}, {"nineteen", 19},
    {"twenty", 20},   {"thirty", 30},    {"forty", 40},    {"fifty", 50},   {"hundred", 100},
    {"không", 0},     {"một", 1},        {"hai", 2},       {"ba", 3},       {"bốn", 4},
    {"tư", 4},        {"năm", 5},        {"sáu", 6},       {"bảy", 7},      {"tám", 8},
    {"chín", 9},      {"mười", 10},      {"trăm", 100},    {"nghìn", 1000},
}};

struct OpWord {
  const char* text;
  Comparison::Op op;
};

constexpr std::array<OpWord, 31> kOps = {{
    {"no more than", Comparison::Op::kLe}, {"no less than", Comparison::Op::kGe},
    {"more than", Comparison::Op::kGt},    {"greater than", Comparison::Op::kGt},
    {"higher than", Comparison::Op::kGt},  {"larger than", Comparison::Op::kGt},
    {"bigger than", Comparison::Op::kGt},  {"over", Comparison::Op::kGt},
    {"above", Comparison::Op::kGt},        {"at least", Comparison::Op::kGe},
    {"less than", Comparison::Op::kLt},    {"fewer than", Comparison::Op::kLt},
    {"lower than", Comparison::Op::kLt},   {"smaller than", Comparison::Op::kLt},
    {"under", Comparison::Op::kLt},        {"below", Comparison::Op::kLt},
    {"at most", Comparison::Op::kLe},      {"exactly", Comparison::Op::kEq},
    {"equal to", Comparison::Op::kEq},     {"lớn hơn", Comparison::Op::kGt},
    {"nhiều hơn", Comparison::Op::kGt},    {"cao hơn", Comparison::Op::kGt},
    {"trên", Comparison::Op::kGt},         {"hơn", Comparison::Op::kGt},
    {"ít nhất", Comparison::Op::kGe},      {"nhỏ hơn", Comparison::Op::kLt},
    {"ít hơn", Comparison::Op::kLt},       {"thấp hơn", Comparison::Op::kLt},
    {"dưới", Comparison::Op::kLt},
    {"bằng", Comparison::Op::kEq},         {"là", Comparison::Op::kEq},
}};

constexpr std::array<const char*, 17> kSuperlatives = {
    "highest", "lowest", "most", "least", "largest", "smallest", "best", "greatest",
    "biggest", "fewest", "cao nhất", "thấp nhất", "lớn nhất", "nhỏ nhất", "tốt nhất",
    "nhất", "nhiều nhất"};

bool starts_with_words(const std::vector<std::string>& w, std::size_t at, std::string_view phrase,
                       std::size_t& len) {
  auto pw = text::split_words(phrase);
  if (at + pw.size() > w.size()) return false;
  for (std::size_t i = 0; i < pw.size(); ++i) {
    if (w[at + i] != pw[i]) return false;
  }
  len = pw.size();
  return true;
}

std::set<std::string> members(const Element& e, const onto::Ontology& ont) {
  if (e.kind == ElementKind::kConcept) return ont.instances_of(e.name, true);
  if (e.kind == ElementKind::kInstance) return {e.name};
  return {};
}

bool same_literal(std::string_view a, std::string_view b) {
  auto na = parse_number(a), nb = parse_number(b);
  if (na && nb) return *na == *nb;
  return text::key(a) == text::key(b);
}

// Instances x in `xs` linked to some y in `ys` (either direction) by `rel` (any when empty).
std::set<std::string> linked(const std::optional<std::set<std::string>>& xs,
                             const std::optional<Element>& target,
                             const std::optional<std::string>& rel, const onto::Ontology& ont) {
  std::set<std::string> ys;
  std::optional<std::string> literal;
  if (target) {
    if (target->kind == ElementKind::kLiteral) literal = target->name;
    else ys = members(*target, ont);
  }
  std::set<std::string> out;
  auto want = [&](const std::string& x) {
    return ont.instance_named(x) && (!xs || xs->count(x));
  };
  for (const auto& a : ont.assertions()) {
    if (rel && a.r != *rel) continue;
    if (literal) {
      if (same_literal(a.o, *literal) && want(a.s)) out.insert(a.s);
      continue;
    }
    if (!target || ys.count(a.o)) {
      if (want(a.s)) out.insert(a.s);
    }
    if (!target || ys.count(a.s)) {
      if (want(a.o)) out.insert(a.o);
    }
  }
  return out;
}

std::optional<std::set<std::string>> scope(const OntologyTuple& t, const onto::Ontology& ont) {
  if (!t.term1 || t.term1->kind == ElementKind::kLiteral) return std::nullopt;
  return members(*t.term1, ont);
}

// Numeric measure of x under rel: a datatype literal, else the number of linked objects.
double measure(const std::string& x, const std::string& rel, const onto::Ontology& ont) {
  const auto* def = ont.relation_named(rel);
  auto objs = ont.objects(x, rel);
  if (def && def->kind == onto::RelationKind::kDatatype) {
    for (const auto& o : objs) {
      if (auto n = parse_number(o)) return *n;
    }
    return 0;
  }
  return static_cast<double>(objs.size());
}

TupleAnswer compare(const OntologyTuple& t, const onto::Ontology& ont) {
  std::optional<double> fallback;
  if (t.term1 && t.term1->kind == ElementKind::kLiteral) fallback = parse_number(t.term1->name);
  if (!t.term3) throw UnsupportedError("comparison without a comparison phrase");
  Comparison c = parse_comparison(*t.term3, fallback);
  if (t.term2 && t.term2->kind == ElementKind::kLiteral) {
    auto n = parse_number(t.term2->name);
    if (!n) throw UnsupportedError("cannot compare '" + t.term2->name + "'");
    return TupleAnswer::boolean(c.holds(*n));
  }
  if (!t.relation) throw UnsupportedError("comparison without a relation");
  std::set<std::string> pool;
  auto s = scope(t, ont);
  if (t.term2 && s) pool = linked(s, t.term2, std::nullopt, ont);
  else if (t.term2) pool = members(*t.term2, ont);
  else if (s) pool = *s;
  else
    for (const auto& i : ont.instances()) pool.insert(i.name);
  std::set<std::string> out;
  for (const auto& x : pool) {
    if (c.holds(measure(x, *t.relation, ont))) out.insert(x);
  }
  return TupleAnswer::instances(std::move(out));
}

}  // namespace

std::optional<double> parse_number(std::string_view s) {
  std::string k = text::key(s);
  if (k.empty()) return std::nullopt;
  std::string digits;
  for (char ch : k) {
    if (ch != ',') digits += ch;
  }
  double v = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec == std::errc() && p == digits.data() + digits.size()) return v;
  for (const auto& w : kNumberWords) {
    if (k == w.text) return w.value;
  }
  return std::nullopt;
}

Comparison parse_comparison(std::string_view payload, std::optional<double> fallback) {
  auto w = text::split_words(text::key(payload));
  for (std::size_t at = 0; at < w.size(); ++at) {
    for (const auto& op : kOps) {
      std::size_t len = 0;
      if (!starts_with_words(w, at, op.text, len)) continue;
      Comparison c;
      c.op = op.op;
      std::optional<double> n;
      for (std::size_t i = at + len; i < w.size() && !n; ++i) n = parse_number(w[i]);
      if (!n) n = fallback;
      if (!n) throw UnsupportedError("comparison '" + std::string(payload) + "' has no number");
      c.value = *n;
      return c;
    }
    for (const char* s : kSuperlatives) {
      std::size_t len = 0;
      if (starts_with_words(w, at, s, len)) {
        throw UnsupportedError("superlative comparison '" + std::string(payload) +
                               "' needs a ranking service");
      }
    }
  }
  throw UnsupportedError("cannot interpret comparison '" + std::string(payload) + "'");
}

bool is_count_category(std::string_view c) {
  return c == "Many" || c == "ManyClass" || c == "QU-howmany";
}

bool is_yesno_category(std::string_view c) { return c == "YesNo" || c == "QU-yesno"; }

TupleAnswer answer_tuple(const OntologyTuple& t, const onto::Ontology& ont) {
  switch (t.sub) {
    case QuestionStructure::kDefinition: {
      if (!t.term2) throw ValidationError("Definition tuple without Term2");
      if (t.term2->kind == ElementKind::kInstance) return TupleAnswer::values(ont.concepts_of(t.term2->name));
      if (t.term2->kind == ElementKind::kConcept) return TupleAnswer::instances(ont.instances_of(t.term2->name));
      return TupleAnswer::values({});
    }
    case QuestionStructure::kCompare:
      return compare(t, ont);
    case QuestionStructure::kUnknTerm:
      return TupleAnswer::instances(linked(std::nullopt, t.term2, t.relation, ont));
    case QuestionStructure::kThreeTerm: {
      auto s = linked(scope(t, ont), t.term2, t.relation, ont);
      if (t.term3_element && t.term3_element->kind == ElementKind::kLiteral) {
        auto n = parse_number(t.term3_element->name);
        if (n && is_count_category(t.category)) return TupleAnswer::boolean(static_cast<double>(s.size()) == *n);
        if (n && t.relation) {
          std::set<std::string> out;
          for (const auto& x : s) {
            if (measure(x, *t.relation, ont) == *n) out.insert(x);
          }
          return TupleAnswer::instances(std::move(out));
        }
      }
      if (t.term3_element) {
        auto third = linked(std::nullopt, t.term3_element, std::nullopt, ont);
        std::set<std::string> out;
        std::set_intersection(s.begin(), s.end(), third.begin(), third.end(),
                              std::inserter(out, out.end()));
        return TupleAnswer::instances(std::move(out));
      }
      return TupleAnswer::instances(std::move(s));
    }
    default:
      if (t.term3) return compare(t, ont);
      return TupleAnswer::instances(linked(scope(t, ont), t.term2, t.relation, ont));
  }
}

namespace {

std::set<std::string> as_set(const TupleAnswer& a) {
  if (a.kind == TupleAnswer::Kind::kBoolean || a.kind == TupleAnswer::Kind::kCount) return {};
  return a.items;
}

bool truthy(const TupleAnswer& a) {
  switch (a.kind) {
    case TupleAnswer::Kind::kBoolean: return a.truth;
    case TupleAnswer::Kind::kCount: return a.count > 0;
    default: return !a.items.empty();
  }
}

void check_arity(QuestionStructure s, std::size_t n) {
  if (is_simple(s) ? n != 1 : n < 2) {
    throw ValidationError(to_string(s) + " cannot combine " + std::to_string(n) + " answers");
  }
}

// Affirm over a concept/instance pair also accepts plain membership.
bool membership(const OntologyTuple& t, const onto::Ontology& ont) {
  if (!t.term1 || !t.term2) return false;
  if (t.term1->kind == ElementKind::kConcept && t.term2->kind == ElementKind::kInstance) {
    return ont.is_a(t.term2->name, t.term1->name);
  }
  if (t.term2->kind == ElementKind::kConcept && t.term1->kind == ElementKind::kInstance) {
    return ont.is_a(t.term1->name, t.term2->name);
  }
  return false;
}

}  // namespace

TupleAnswer compose(QuestionStructure s, const std::vector<TupleAnswer>& parts) {
  check_arity(s, parts.size());
  switch (s) {
    case QuestionStructure::kAnd:
    case QuestionStructure::kAffirmMoreTuples: {
      auto acc = as_set(parts[0]);
      for (std::size_t i = 1; i < parts.size(); ++i) {
        auto next = as_set(parts[i]);
        std::set<std::string> out;
        std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(),
                              std::inserter(out, out.end()));
        acc = std::move(out);
      }
      if (s == QuestionStructure::kAffirmMoreTuples) return TupleAnswer::boolean(!acc.empty());
      return TupleAnswer::instances(std::move(acc));
    }
    case QuestionStructure::kOr: {
      std::set<std::string> acc;
      for (const auto& p : parts) {
        auto x = as_set(p);
        acc.insert(x.begin(), x.end());
      }
      return TupleAnswer::instances(std::move(acc));
    }
    case QuestionStructure::kCombine: {
      TupleAnswer a;
      for (const auto& p : parts) {
        a.groups.push_back(as_set(p));
        a.items.insert(a.groups.back().begin(), a.groups.back().end());
      }
      return a;
    }
    case QuestionStructure::kClause:
      throw ValidationError("Clause answers need the ontology tuples");
    case QuestionStructure::kAffirm:
    case QuestionStructure::kAffirm3Term:
      return TupleAnswer::boolean(truthy(parts[0]));
    default:
      return parts[0];
  }
}

TupleAnswer answer_ir(QuestionStructure s, const std::vector<OntologyTuple>& tuples,
                      const onto::Ontology& ont) {
  check_arity(s, tuples.size());
  if (s == QuestionStructure::kClause) {
    TupleAnswer inner = answer_tuple(tuples[1], ont);
    const OntologyTuple& outer = tuples[0];
    if (is_count_category(tuples[1].category) && inner.kind != TupleAnswer::Kind::kBoolean) {
      OntologyTuple t = outer;
      auto n = inner.kind == TupleAnswer::Kind::kCount ? inner.count
                                                       : static_cast<std::int64_t>(inner.items.size());
      t.term2 = Element{std::to_string(n), ElementKind::kLiteral};
      return answer_tuple(t, ont);
    }
    TupleAnswer acc = TupleAnswer::instances({});
    bool any_bool = false;
    bool truth = false;
    for (const auto& e : inner.items) {
      OntologyTuple t = outer;
      t.term2 = Element{e, ont.instance_named(e) ? ElementKind::kInstance : ElementKind::kLiteral};
      TupleAnswer part = answer_tuple(t, ont);
      if (part.kind == TupleAnswer::Kind::kBoolean) {
        any_bool = true;
        truth = truth || part.truth;
      } else {
        acc.items.insert(part.items.begin(), part.items.end());
      }
    }
    if (any_bool) return TupleAnswer::boolean(truth);
    return acc;
  }
  std::vector<TupleAnswer> parts;
  for (const auto& t : tuples) parts.push_back(answer_tuple(t, ont));
  if (s == QuestionStructure::kAffirm) {
    return TupleAnswer::boolean(truthy(parts[0]) || membership(tuples[0], ont));
  }
  return compose(s, parts);
}

Answer render(std::string_view category, const TupleAnswer& r) {
  Answer a;
  auto list = [&](const std::set<std::string>& s) { return std::vector<std::string>(s.begin(), s.end()); };
  if (r.kind == TupleAnswer::Kind::kBoolean || (is_yesno_category(category) &&
                                                r.kind != TupleAnswer::Kind::kCount)) {
    bool b = r.kind == TupleAnswer::Kind::kBoolean ? r.truth : !r.items.empty();
    a.kind = "bool";
    a.text = b ? "yes" : "no";
    return a;
  }
  if (r.kind == TupleAnswer::Kind::kCount || is_count_category(category)) {
    a.kind = "count";
    auto n = r.kind == TupleAnswer::Kind::kCount ? r.count : static_cast<std::int64_t>(r.items.size());
    a.text = std::to_string(n);
    return a;
  }
  a.kind = r.kind == TupleAnswer::Kind::kValues ? "values" : "list";
  a.items = list(r.items);
  if (!r.groups.empty()) {
    std::string t;
    for (std::size_t i = 0; i < r.groups.size(); ++i) {
      a.groups.push_back(list(r.groups[i]));
      if (i) t += "\n";
      t += "[" + std::to_string(i + 1) + "]";
      for (const auto& x : a.groups.back()) t += " " + x + ";";
      if (!a.groups.back().empty()) t.pop_back();
    }
    a.text = t;
    return a;
  }
  a.text = text::join(a.items, "\n");
  return a;
}

nlohmann::json to_json(const Answer& a) {
  nlohmann::json j = {{"kind", a.kind}, {"items", a.items}, {"text", a.text},
                      {"provenance", a.provenance}};
  if (!a.groups.empty()) j["groups"] = a.groups;
  return j;
}

}  // namespace kbqa::answer
