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

#include "kbqa/kb.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "kbqa/error.hpp"

namespace kbqa::scrdr {

KnowledgeBase::KnowledgeBase(Language lang, NodeId root) : lang_(lang), root_(root) {}

const RuleNode& KnowledgeBase::node(NodeId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw LookupError("no rule node " + std::to_string(id));
  return it->second;
}

RuleNode& KnowledgeBase::node(NodeId id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw LookupError("no rule node " + std::to_string(id));
  return it->second;
}

void KnowledgeBase::insert(RuleNode n) {
  NodeId id = n.id;
  if (!nodes_.emplace(id, std::move(n)).second) {
    throw ValidationError("duplicate node id " + std::to_string(id));
  }
}

NodeId KnowledgeBase::next_id() const noexcept {
  return nodes_.empty() ? 0 : nodes_.rbegin()->first + 1;
}

KnowledgeBase new_kb(Language lang) {
  KnowledgeBase kb(lang, 0);
  kb.insert(make_node(0, std::string(kTrueCondition), {}, std::nullopt));
  return kb;
}

RuleNode make_node(NodeId id, std::string rule_text, std::vector<std::string> extra,
                   std::optional<ConclusionTemplate> conclusion) {
  RuleNode n;
  n.id = id;
  n.rule_text = std::move(rule_text);
  if (n.rule_text != kTrueCondition) n.rule = pattern::parse_rule(n.rule_text);
  for (auto& e : extra) n.extra.push_back(pattern::parse_extra(e));
  n.extra_text = std::move(extra);
  n.conclusion = std::move(conclusion);
  return n;
}

bool fire(const RuleNode& node, Document& doc) {
  if (node.always_true()) return true;
  Document trial = doc;
  auto m = pattern::match_anywhere(trial, *node.rule);
  if (!m) return false;
  for (const auto& e : node.extra) {
    if (!pattern::check_extra(trial, *m, e)) return false;
  }
  doc = std::move(trial);
  return true;
}

EvaluationResult evaluate(const KnowledgeBase& kb, Document& doc) {
  EvaluationResult r;
  std::optional<NodeId> cur = kb.root();
  while (cur) {
    if (r.path.size() > kb.size()) throw ValidationError("cycle in rule tree");
    const RuleNode& n = kb.node(*cur);
    r.path.push_back(n.id);
    if (fire(n, doc)) {
      r.fired.push_back(n.id);
      r.last_fired = n.id;
      cur = n.except_child;
    } else {
      cur = n.false_child;
    }
  }
  const RuleNode& last = kb.node(r.last_fired);
  if (last.conclusion) {
    r.conclusion = instantiate(*last.conclusion, doc, SurfaceTrim::for_language(kb.language()));
  }
  return r;
}

Attachment attachment_point(const KnowledgeBase&, const EvaluationResult& r) {
  NodeId last = r.path.back();
  return {last, !r.fired.empty() && r.fired.back() == last};
}

namespace {

bool same_attachment(const Attachment& a, const Attachment& b) {
  return a.parent == b.parent && a.as_except == b.as_except;
}

}  // namespace

NodeId add_exception(KnowledgeBase& kb, const Document& case_doc, std::string_view case_text,
                     const RuleDraft& draft, const CaseBuilder& build) {
  NodeId id = kb.next_id();
  RuleNode fresh = make_node(id, draft.rule_text, draft.extra, draft.conclusion);
  if (fresh.always_true()) throw RuleRejected("an exception rule needs a condition");

  Document doc = case_doc;
  EvaluationResult r = evaluate(kb, doc);
  Attachment at = attachment_point(kb, r);
  const RuleNode& parent = kb.node(at.parent);
  auto& slot = at.as_except ? parent.except_child : parent.false_child;
  if (slot) throw Error("attachment slot of node " + std::to_string(at.parent) + " occupied");

  if (!fire(fresh, doc)) {
    throw RuleRejected("rule does not fire on the case after path " +
                       [&] {
                         std::string p;
                         for (NodeId n : r.path) p += (p.empty() ? "" : "-") + std::to_string(n);
                         return p;
                       }());
  }
  try {
    instantiate(draft.conclusion, doc, SurfaceTrim::for_language(kb.language()));
  } catch (const InstantiationError& e) {
    throw RuleRejected(std::string("conclusion cannot be built for the case: ") + e.what());
  }

  // Every stored case that reaches the same empty slot must not fire the new rule.
  for (const auto& [nid, n] : kb.nodes()) {
    if (!n.cornerstone || !build) continue;
    Document other = build(*n.cornerstone);
    EvaluationResult ro = evaluate(kb, other);
    if (!same_attachment(attachment_point(kb, ro), at)) continue;
    if (fire(fresh, other)) {
      throw ConsistencyError("rule also fires on the cornerstone of node " + std::to_string(nid) +
                                 ": " + *n.cornerstone,
                             static_cast<int>(nid), *n.cornerstone);
    }
  }

  fresh.cornerstone = std::string(case_text);
  RuleNode& p = kb.node(at.parent);
  (at.as_except ? p.except_child : p.false_child) = id;
  kb.insert(std::move(fresh));
  return id;
}

std::vector<std::string> validate_kb(const KnowledgeBase& kb) {
  std::vector<std::string> v;
  if (!kb.contains(kb.root())) {
    v.push_back("root node " + std::to_string(kb.root()) + " missing");
    return v;
  }
  const RuleNode& root = kb.node(kb.root());
  if (!root.always_true()) v.push_back("default node must have the condition True");
  if (root.conclusion) v.push_back("default node must have a null conclusion");

  std::map<NodeId, int> parents;
  for (const auto& [id, n] : kb.nodes()) {
    if (id != kb.root() && n.always_true()) {
      v.push_back("node " + std::to_string(id) + " has the always-true condition");
    }
    if (n.except_child && n.false_child && *n.except_child == *n.false_child) {
      v.push_back("node " + std::to_string(id) + " has identical except and false children");
    }
    for (const auto& c : {n.except_child, n.false_child}) {
      if (!c) continue;
      if (!kb.contains(*c)) {
        v.push_back("node " + std::to_string(id) + " points to missing node " + std::to_string(*c));
        continue;
      }
      ++parents[*c];
    }
  }
  for (const auto& [id, count] : parents) {
    if (count > 1) v.push_back("node " + std::to_string(id) + " has more than one parent");
  }
  if (parents.count(kb.root())) v.push_back("root node " + std::to_string(kb.root()) + " has a parent");
  for (const auto& [id, n] : kb.nodes()) {
    if (id != kb.root() && !parents.count(id)) {
      v.push_back("node " + std::to_string(id) + " is a second root");
    }
  }

  // Depth-first walk from the root; revisiting means a cycle.
  std::set<NodeId> seen;
  std::vector<NodeId> stack{kb.root()};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) {
      v.push_back("cycle at node " + std::to_string(id));
      continue;
    }
    const RuleNode& n = kb.node(id);
    for (const auto& c : {n.false_child, n.except_child}) {
      if (c && kb.contains(*c)) stack.push_back(*c);
    }
  }
  for (const auto& [id, n] : kb.nodes()) {
    (void)n;
    if (!seen.count(id)) v.push_back("node " + std::to_string(id) + " unreachable from root");
  }
  return v;
}

std::map<NodeId, int> layers(const KnowledgeBase& kb) {
  std::map<NodeId, int> out;
  if (!kb.contains(kb.root())) return out;
  std::vector<std::pair<NodeId, int>> stack{{kb.root(), 0}};
  while (!stack.empty()) {
    auto [id, layer] = stack.back();
    stack.pop_back();
    if (!out.emplace(id, layer).second) continue;
    const RuleNode& n = kb.node(id);
    if (n.except_child && kb.contains(*n.except_child)) stack.push_back({*n.except_child, layer + 1});
    if (n.false_child && kb.contains(*n.false_child)) stack.push_back({*n.false_child, layer});
  }
  return out;
}

std::vector<std::size_t> layer_histogram(const KnowledgeBase& kb) {
  std::vector<std::size_t> h;
  for (const auto& [id, layer] : layers(kb)) {
    (void)id;
    if (h.size() <= static_cast<std::size_t>(layer)) h.resize(layer + 1);
    ++h[layer];
  }
  return h;
}

namespace {

nlohmann::json opt_id(const std::optional<NodeId>& id) {
  return id ? nlohmann::json(*id) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const KnowledgeBase& kb) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& [id, n] : kb.nodes()) {
    nodes.push_back({{"id", id},
                     {"rule_text", n.rule_text},
                     {"extra", n.extra_text},
                     {"conclusion", n.conclusion ? to_json(*n.conclusion) : nlohmann::json(nullptr)},
                     {"except", opt_id(n.except_child)},
                     {"false", opt_id(n.false_child)},
                     {"cornerstone", n.cornerstone ? nlohmann::json(*n.cornerstone)
                                                   : nlohmann::json(nullptr)}});
  }
  return {{"version", 1},
          {"language", to_string(kb.language())},
          {"root", kb.root()},
          {"nodes", nodes}};
}

KnowledgeBase kb_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("knowledge base must be a JSON object");
  if (j.value("version", 0) != 1) throw ValidationError("unsupported knowledge base version");
  KnowledgeBase kb(parse_language(j.at("language").get<std::string>()),
                   j.value("root", NodeId{0}));
  for (const auto& jn : j.at("nodes")) {
    NodeId id = jn.at("id").get<NodeId>();
    std::string where = "node " + std::to_string(id);
    RuleNode n;
    try {
      std::optional<ConclusionTemplate> concl;
      if (jn.contains("conclusion") && !jn.at("conclusion").is_null()) {
        concl = template_from_json(jn.at("conclusion"));
      }
      n = make_node(id, jn.at("rule_text").get<std::string>(),
                    jn.value("extra", std::vector<std::string>{}), std::move(concl));
    } catch (const ParseError& e) {
      throw e.in(where);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(where + ": " + e.what());
    }
    auto child = [&](const char* key) -> std::optional<NodeId> {
      if (!jn.contains(key) || jn.at(key).is_null()) return std::nullopt;
      return jn.at(key).get<NodeId>();
    };
    n.except_child = child("except");
    n.false_child = child("false");
    if (jn.contains("cornerstone") && !jn.at("cornerstone").is_null()) {
      n.cornerstone = jn.at("cornerstone").get<std::string>();
    }
    kb.insert(std::move(n));
  }
  return kb;
}

void persist_kb(const KnowledgeBase& kb, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << to_json(kb).dump(2) << '\n';
    if (!out) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

KnowledgeBase load_kb(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LookupError("cannot open knowledge base " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError::located(path.string(), e.what(), 0, static_cast<int>(e.byte));
  }
  KnowledgeBase kb = kb_from_json(j);
  auto v = validate_kb(kb);
  if (!v.empty()) {
    std::string msg = path.string() + ": invalid knowledge base";
    for (const auto& s : v) msg += "; " + s;
    throw ValidationError(msg);
  }
  return kb;
}

}  // namespace kbqa::scrdr
