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

#include "kbqa/ir.hpp"

#include <algorithm>

#include "kbqa/text.hpp"

namespace kbqa {

namespace {

constexpr std::array<const char*, 13> kStructureNames = {
    "Normal", "UnknTerm", "UnknRel", "Definition", "Compare", "ThreeTerm", "Clause",
    "Combine", "And", "Or", "Affirm_MoreTuples", "Affirm", "Affirm_3Term",
};

nlohmann::json opt(const std::optional<std::string>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<std::string> opt_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

std::vector<std::string> words_of(std::string_view s) { return text::split_words(s); }

// Removes leading (or trailing) phrases from `words` while any matches.
void strip(std::vector<std::string>& words, const std::vector<std::string>& phrases, bool leading) {
  bool changed = true;
  while (changed && !words.empty()) {
    changed = false;
    for (const auto& p : phrases) {
      auto pw = text::split_words(text::key(p));
      if (pw.empty() || pw.size() > words.size()) continue;
      std::size_t off = leading ? 0 : words.size() - pw.size();
      bool ok = true;
      for (std::size_t i = 0; i < pw.size() && ok; ++i) ok = text::fold(words[off + i]) == pw[i];
      if (!ok) continue;
      if (leading) words.erase(words.begin(), words.begin() + static_cast<long>(pw.size()));
      else words.resize(words.size() - pw.size());
      changed = true;
      break;
    }
  }
}

std::optional<std::string> present(std::string s) {
  if (s.empty()) return std::nullopt;
  return s;
}

}  // namespace

std::string to_string(QuestionStructure s) { return kStructureNames[static_cast<std::size_t>(s)]; }

std::optional<QuestionStructure> parse_structure(std::string_view name) {
  for (std::size_t i = 0; i < kStructureNames.size(); ++i) {
    if (name == kStructureNames[i]) return static_cast<QuestionStructure>(i);
  }
  return std::nullopt;
}

bool is_simple(QuestionStructure s) {
  switch (s) {
    case QuestionStructure::kClause:
    case QuestionStructure::kCombine:
    case QuestionStructure::kAnd:
    case QuestionStructure::kOr:
    case QuestionStructure::kAffirmMoreTuples:
      return false;
    default:
      return true;
  }
}

const std::vector<std::string>& category_registry(Language lang) {
  static const std::vector<std::string> vi = {"What", "When", "Where", "Who", "HowWhy",
                                              "YesNo", "Many", "ManyClass", "List", "Entity"};
  static const std::vector<std::string> en = {"QU-who-what", "QU-whichClass", "QU-listClass",
                                              "QU-howmany", "QU-yesno"};
  return lang == Language::kVi ? vi : en;
}

bool is_known_category(std::string_view label) {
  for (Language l : {Language::kVi, Language::kEn}) {
    const auto& r = category_registry(l);
    if (std::find(r.begin(), r.end(), label) != r.end()) return true;
  }
  return false;
}

nlohmann::json to_json(const QueryTuple& t) {
  return {{"sub", t.sub},         {"cat", t.category}, {"t1", opt(t.term1)},
          {"rel", opt(t.relation)}, {"t2", opt(t.term2)}, {"t3", opt(t.term3)}};
}

nlohmann::json to_json(const IntermediateRepresentation& ir) {
  nlohmann::json tuples = nlohmann::json::array();
  for (const auto& t : ir.tuples) tuples.push_back(to_json(t));
  return {{"structure", to_string(ir.structure)}, {"tuples", tuples}};
}

IntermediateRepresentation ir_from_json(const nlohmann::json& j) {
  IntermediateRepresentation ir;
  auto name = j.at("structure").get<std::string>();
  auto s = parse_structure(name);
  if (!s) throw ValidationError("unknown question structure '" + name + "'");
  ir.structure = *s;
  for (const auto& t : j.at("tuples")) {
    ir.tuples.push_back({t.at("sub").get<std::string>(), t.at("cat").get<std::string>(),
                         opt_from(t, "t1"), opt_from(t, "rel"), opt_from(t, "t2"),
                         opt_from(t, "t3")});
  }
  return ir;
}

std::string to_text(const QueryTuple& t) {
  auto v = [](const std::optional<std::string>& s) { return s ? *s : std::string("?"); };
  return "(" + t.sub + ", " + t.category + ", " + v(t.term1) + ", " + v(t.relation) + ", " +
         v(t.term2) + ", " + v(t.term3) + ")";
}

std::string to_text(const IntermediateRepresentation& ir) {
  std::string out = to_string(ir.structure);
  for (const auto& t : ir.tuples) out += " " + to_text(t);
  return out;
}

std::vector<std::string> validate_ir(const IntermediateRepresentation& ir) {
  std::vector<std::string> v;
  const std::string name = to_string(ir.structure);
  if (ir.tuples.empty()) v.push_back(name + ": no query tuples");
  if (is_simple(ir.structure) && ir.tuples.size() > 1) {
    v.push_back(name + " requires exactly one query tuple, got " + std::to_string(ir.tuples.size()));
  }
  if (!is_simple(ir.structure) && ir.tuples.size() < 2) {
    v.push_back(name + " requires at least two query tuples, got " + std::to_string(ir.tuples.size()));
  }
  for (std::size_t i = 0; i < ir.tuples.size(); ++i) {
    const auto& t = ir.tuples[i];
    std::string at = "tuple " + std::to_string(i + 1) + ": ";
    if (!is_known_category(t.category)) v.push_back(at + "unknown category '" + t.category + "'");
    auto sub = parse_structure(t.sub);
    if (!sub) {
      v.push_back(at + "unknown sub-structure '" + t.sub + "'");
      continue;
    }
    switch (*sub) {
      case QuestionStructure::kNormal:
        // a Compare question keeps its comparison phrase in Term3
        if (t.term3 && ir.structure != QuestionStructure::kCompare) {
          v.push_back(at + "Normal must not have Term3");
        }
        break;
      case QuestionStructure::kUnknTerm:
        if (t.term1) v.push_back(at + "UnknTerm must not have Term1");
        if (t.term3) v.push_back(at + "UnknTerm must not have Term3");
        break;
      case QuestionStructure::kUnknRel:
        if (t.relation) v.push_back(at + "UnknRel must not have a Relation");
        if (t.term3) v.push_back(at + "UnknRel must not have Term3");
        break;
      case QuestionStructure::kDefinition:
        if (t.term1 || t.relation || t.term3 || !t.term2) {
          v.push_back(at + "Definition must carry Term2 only");
        }
        break;
      case QuestionStructure::kThreeTerm:
        if (!t.term3) v.push_back(at + "ThreeTerm requires Term3");
        break;
      default:
        break;
    }
  }
  return v;
}

// ---------------------------------------------------------------- templates

Slot Slot::parse(std::string_view raw) {
  std::string s = text::normalize_space(raw);
  Slot slot;
  if (s.empty() || s == "?") return slot;
  std::vector<std::string> parts;
  std::size_t b = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '.') {
      parts.push_back(s.substr(b, i - b));
      b = i + 1;
    }
  }
  for (const auto& p : parts) {
    if (p.empty()) throw ValidationError("malformed conclusion slot '" + s + "'");
  }
  switch (parts.size()) {
    case 1:
      slot.kind = Kind::kCoveredText;
      slot.type = parts[0];
      break;
    case 2:
      slot.kind = Kind::kStructureFeature;
      slot.type = parts[0];
      slot.feature = parts[1];
      break;
    case 3:
      slot.kind = Kind::kFeatureOf;
      slot.type = parts[0];
      slot.colocated = parts[1];
      slot.feature = parts[2];
      break;
    default:
      throw ValidationError("malformed conclusion slot '" + s + "'");
  }
  return slot;
}

std::string Slot::to_text() const {
  switch (kind) {
    case Kind::kAbsent: return "?";
    case Kind::kCoveredText: return type;
    case Kind::kStructureFeature: return type + "." + feature;
    case Kind::kFeatureOf: return type + "." + colocated + "." + feature;
  }
  return "?";
}

nlohmann::json to_json(const ConclusionTemplate& t) {
  nlohmann::json tuples = nlohmann::json::array();
  for (const auto& tuple : t.tuples) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& s : tuple) row.push_back(s.to_text());
    tuples.push_back(row);
  }
  return {{"structure", to_string(t.structure)}, {"tuples", tuples}};
}

ConclusionTemplate template_from_json(const nlohmann::json& j) {
  ConclusionTemplate t;
  auto name = j.at("structure").get<std::string>();
  auto s = parse_structure(name);
  if (!s) throw ValidationError("unknown question structure '" + name + "'");
  t.structure = *s;
  for (const auto& row : j.at("tuples")) {
    if (!row.is_array() || row.size() != 6) {
      throw ValidationError("conclusion tuple must have 6 slots");
    }
    std::array<Slot, 6> slots;
    for (std::size_t i = 0; i < 6; ++i) slots[i] = Slot::parse(row[i].get<std::string>());
    t.tuples.push_back(slots);
  }
  if (t.tuples.empty()) throw ValidationError("conclusion must have at least one tuple");
  return t;
}

std::vector<std::string> referenced_types(const ConclusionTemplate& t) {
  std::vector<std::string> out;
  for (const auto& tuple : t.tuples) {
    for (const auto& s : tuple) {
      if (s.kind != Slot::Kind::kAbsent &&
          std::find(out.begin(), out.end(), s.type) == out.end()) {
        out.push_back(s.type);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- trimming

const SurfaceTrim& SurfaceTrim::for_language(Language lang) {
  static const SurfaceTrim vi{
      {"liệt kê", "cho biết", "chỉ ra", "kể ra", "tìm", "danh sách", "tất cả", "các", "những",
       "mọi", "số lượng", "là bao nhiêu", "có bao nhiêu", "bao nhiêu", "ai", "tồn tại"},
      {"là gì", "cái gì", "nào", "gì", "này", "kia", "ấy", "đó"},
      {"được", "bị", "đã", "đang", "sẽ"},
      {"ở", "bởi", "của", "tại", "với", "trong", "cho", "về", "từ", "vào"},
  };
  static const SurfaceTrim en{
      {"how many", "which", "what", "who", "whom", "whose", "how", "list", "give", "show",
       "find", "tell", "me", "all", "the", "a", "an", "some", "any", "every", "that", "is",
       "are", "does", "do"},
      {},
      {"is", "are", "was", "were", "be", "been", "am", "do", "does", "did", "the", "a", "an"},
      {"in", "on", "to", "with", "by", "of", "for", "at", "from", "about", "into"},
  };
  return lang == Language::kVi ? vi : en;
}

const SurfaceTrim& SurfaceTrim::none() {
  static const SurfaceTrim empty{};
  return empty;
}

std::string SurfaceTrim::term(std::string_view s) const {
  auto w = words_of(s);
  strip(w, term_prefixes, true);
  strip(w, term_suffixes, false);
  return text::join(w);
}

std::string SurfaceTrim::relation(std::string_view s) const {
  auto w = words_of(s);
  strip(w, relation_prefixes, true);
  return text::join(w);
}

// ---------------------------------------------------------------- instantiate

namespace {

const Annotation& latest(const Document& doc, const std::string& type, const std::string& where) {
  const auto& ids = doc.of_type(type);
  if (ids.empty()) throw InstantiationError(where + ": no " + type + " annotation");
  return doc.get(*std::max_element(ids.begin(), ids.end()));
}

std::string resolve(const Slot& s, const Document& doc, const std::string& where) {
  const Annotation& a = latest(doc, s.type, where);
  switch (s.kind) {
    case Slot::Kind::kAbsent:
      return {};
    case Slot::Kind::kCoveredText:
      return doc.substr(a.span);
    case Slot::Kind::kStructureFeature: {
      auto v = a.feature(s.feature);
      if (!v) throw InstantiationError(where + ": " + s.type + " has no feature " + s.feature);
      return std::string(*v);
    }
    case Slot::Kind::kFeatureOf: {
      std::optional<std::string> value;
      for (AnnotationId id : doc.find_within(a.span, s.colocated)) {
        const auto& c = doc.get(id);
        if (c.span != a.span) continue;
        if (auto v = c.feature(s.feature)) value = std::string(*v);
      }
      if (!value) {
        throw InstantiationError(where + ": no " + s.colocated + " with feature " + s.feature +
                                 " over " + s.type);
      }
      return *value;
    }
  }
  return {};
}

}  // namespace

IntermediateRepresentation instantiate(const ConclusionTemplate& t, const Document& doc,
                                       const SurfaceTrim& trim) {
  static const char* kSlotNames[6] = {"sub-structure", "category", "Term1",
                                      "Relation",      "Term2",    "Term3"};
  IntermediateRepresentation ir;
  ir.structure = t.structure;
  for (std::size_t ti = 0; ti < t.tuples.size(); ++ti) {
    std::array<std::optional<std::string>, 6> v;
    for (std::size_t si = 0; si < 6; ++si) {
      const Slot& s = t.tuples[ti][si];
      if (s.kind == Slot::Kind::kAbsent) continue;
      std::string where = "tuple " + std::to_string(ti + 1) + " " + kSlotNames[si];
      std::string raw = text::normalize_space(resolve(s, doc, where));
      if (s.kind == Slot::Kind::kCoveredText) {
        raw = si == 3 ? trim.relation(raw) : si >= 2 ? trim.term(raw) : raw;
      }
      v[si] = present(raw);
    }
    ir.tuples.push_back({v[0].value_or(""), v[1].value_or(""), v[2], v[3], v[4], v[5]});
  }
  return ir;
}

bool ir_matches(const IntermediateRepresentation& expected,
                const IntermediateRepresentation& actual, const SurfaceTrim& trim) {
  if (expected.structure != actual.structure || expected.tuples.size() != actual.tuples.size()) {
    return false;
  }
  auto same = [](const std::optional<std::string>& a, const std::optional<std::string>& b) {
    if (!a || !b) return !a && !b;
    return text::normalize_space(*a) == text::normalize_space(*b);
  };
  for (std::size_t i = 0; i < expected.tuples.size(); ++i) {
    const auto& e = expected.tuples[i];
    const auto& a = actual.tuples[i];
    if (e.sub != a.sub || e.category != a.category || !same(e.term1, a.term1) ||
        !same(e.term2, a.term2) || !same(e.term3, a.term3)) {
      return false;
    }
    if (same(e.relation, a.relation)) continue;
    if (!e.relation || !a.relation) return false;
    auto w = text::split_words(*a.relation);
    if (w.size() < 2) return false;
    const auto& preps = trim.prepositions;
    if (std::find(preps.begin(), preps.end(), text::fold(w.back())) == preps.end()) return false;
    w.pop_back();
    if (text::join(w) != text::normalize_space(*e.relation)) return false;
  }
  return true;
}

}  // namespace kbqa
