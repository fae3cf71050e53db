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

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbqa/annotation.hpp"
#include "kbqa/answer.hpp"
#include "kbqa/error.hpp"
#include "kbqa/ir.hpp"
#include "kbqa/kb.hpp"
#include "kbqa/language.hpp"
#include "kbqa/mapper.hpp"
#include "kbqa/ontology.hpp"
#include "kbqa/pipeline.hpp"

namespace kbqa {

class SessionExpired : public Error {
 public:
  using Error::Error;
};

struct EngineConfig {
  Language language = Language::kEn;
  std::filesystem::path kb;
  std::filesystem::path ontology;
  std::vector<std::filesystem::path> lexicons;
  std::optional<std::filesystem::path> synonyms;
  double threshold = 0.8;
  std::optional<std::vector<std::string>> stop_words;
  std::chrono::seconds session_ttl{1800};

  /// Relative paths resolve against `base`.
  static EngineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
  static EngineConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  /// Throws ValidationError on a missing file or a bad threshold.
  void validate() const;
};

/// "word/TAG word/TAG ..." with every token tagged.
bool looks_pretagged(std::string_view question);

/// Adds "name<TAB>synonym..." lines to the matching ontology elements.
nlohmann::json merge_synonyms(nlohmann::json ontology, std::istream& lines);

struct Analysis {
  Document doc;
  scrdr::EvaluationResult eval;
  std::optional<IntermediateRepresentation> ir;
  std::string error;

  nlohmann::json to_json(bool with_annotations = true) const;
};

struct KbEditRequest {
  std::string question;
  std::optional<bool> pretagged;
  std::string rule_text;
  std::vector<std::string> extra;
  nlohmann::json conclusion;
  bool dry_run = false;

  static KbEditRequest from_json(const nlohmann::json& j);
};

struct CorpusItem {
  std::size_t line = 0;
  std::string question;
  std::optional<bool> pretagged;
  IntermediateRepresentation expected;
};

/// One JSON object per line; blank lines and '#' comments are skipped.
std::vector<CorpusItem> parse_corpus(std::istream& in, const std::string& source = "<corpus>");
std::vector<CorpusItem> load_corpus(const std::filesystem::path& path);

class Engine {
 public:
  explicit Engine(EngineConfig cfg);
  Engine(EngineConfig cfg, scrdr::KnowledgeBase kb, onto::Ontology ont, pipeline::Lexicon lexicon);

  const EngineConfig& config() const noexcept { return cfg_; }
  Language language() const noexcept { return cfg_.language; }
  const onto::Ontology& ontology() const noexcept { return ont_; }
  const pipeline::Pipeline& pipeline() const noexcept { return pipeline_; }
  std::shared_ptr<const scrdr::KnowledgeBase> kb() const;

  Document annotate(std::string_view question, std::optional<bool> pretagged = std::nullopt) const;
  Analysis analyze(std::string_view question, std::optional<bool> pretagged = std::nullopt) const;

  /// {"status": "answer"|"choice"|"unanalyzed", ...}
  nlohmann::json answer(std::string_view question, std::optional<bool> pretagged = std::nullopt);
  nlohmann::json resume(const std::string& session_id, std::string_view selection);

  nlohmann::json add_exception(const KbEditRequest& req);

  nlohmann::json evaluate_corpus(const std::vector<CorpusItem>& items) const;
  nlohmann::json kb_stats() const;
  nlohmann::json ontology_summary() const;

  std::size_t session_count() const;

 private:
  struct Session {
    std::string id;
    std::string question;
    IntermediateRepresentation ir;
    mapping::Choices choices;
    std::optional<mapping::PendingChoice> pending;
    std::chrono::steady_clock::time_point created;
    bool done = false;
    std::mutex lock;
  };

  nlohmann::json advance(const std::shared_ptr<Session>& s);
  std::string new_session_id();
  mapping::MapperConfig mapper_config() const;

  EngineConfig cfg_;
  onto::Ontology ont_;
  pipeline::Pipeline pipeline_;
  mutable std::shared_mutex kb_mutex_;
  std::mutex write_mutex_;
  std::shared_ptr<const scrdr::KnowledgeBase> kb_;
  mutable std::mutex session_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t session_counter_ = 0;
};

}  // namespace kbqa
