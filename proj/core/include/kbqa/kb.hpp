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
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbqa/annotation.hpp"
#include "kbqa/ir.hpp"
#include "kbqa/language.hpp"
#include "kbqa/pattern.hpp"

namespace kbqa::scrdr {

using NodeId = std::int64_t;

/// Rule text of the default node.
inline constexpr std::string_view kTrueCondition = "True";

struct RuleNode {
  NodeId id = 0;
  std::string rule_text;
  std::optional<pattern::Rule> rule;  // empty for the default node
  std::vector<std::string> extra_text;
  std::vector<pattern::ExtraConstraint> extra;
  std::optional<ConclusionTemplate> conclusion;
  std::optional<NodeId> except_child;
  std::optional<NodeId> false_child;
  std::optional<std::string> cornerstone;

  bool always_true() const noexcept { return !rule.has_value(); }
};

struct RuleDraft {
  std::string rule_text;
  std::vector<std::string> extra;
  ConclusionTemplate conclusion;
};

class KnowledgeBase {
 public:
  explicit KnowledgeBase(Language lang, NodeId root = 0);

  Language language() const noexcept { return lang_; }
  NodeId root() const noexcept { return root_; }
  const std::map<NodeId, RuleNode>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  bool contains(NodeId id) const noexcept { return nodes_.count(id) != 0; }
  const RuleNode& node(NodeId id) const;
  RuleNode& node(NodeId id);

  /// Inserts a node as-is; fails on a duplicate id.
  void insert(RuleNode n);
  NodeId next_id() const noexcept;

 private:
  Language lang_;
  NodeId root_;
  std::map<NodeId, RuleNode> nodes_;
};

KnowledgeBase new_kb(Language lang);

/// Builds a node from texts, parsing rule, extras and conclusion.
RuleNode make_node(NodeId id, std::string rule_text, std::vector<std::string> extra,
                   std::optional<ConclusionTemplate> conclusion);

struct EvaluationResult {
  std::vector<NodeId> path;
  NodeId last_fired = 0;
  std::vector<NodeId> fired;
  std::optional<IntermediateRepresentation> conclusion;
};

/// Tests one node; postings are committed to `doc` only when it fires.
bool fire(const RuleNode& node, Document& doc);

EvaluationResult evaluate(const KnowledgeBase& kb, Document& doc);

/// Re-creates the annotated document of a stored cornerstone question.
using CaseBuilder = std::function<Document(std::string_view question)>;

struct Attachment {
  NodeId parent = 0;
  bool as_except = true;
};

Attachment attachment_point(const KnowledgeBase& kb, const EvaluationResult& r);

/// Appends an exception rule for a misclassified case; returns the new id.
NodeId add_exception(KnowledgeBase& kb, const Document& case_doc, std::string_view case_text,
                     const RuleDraft& draft, const CaseBuilder& build);

std::vector<std::string> validate_kb(const KnowledgeBase& kb);

/// Layer of every reachable node; except edges add one, false edges keep it.
std::map<NodeId, int> layers(const KnowledgeBase& kb);
/// Node count per layer, index = layer.
std::vector<std::size_t> layer_histogram(const KnowledgeBase& kb);

nlohmann::json to_json(const KnowledgeBase& kb);
KnowledgeBase kb_from_json(const nlohmann::json& j);
void persist_kb(const KnowledgeBase& kb, const std::filesystem::path& path);
KnowledgeBase load_kb(const std::filesystem::path& path);

}  // namespace kbqa::scrdr
