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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kbqa/engine.hpp"
#include "kbqa/http_service.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kDataError = 2;

struct Common {
  std::string config;
  std::string lang;
  bool pretagged = false;
  bool json = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "engine configuration file");
  cmd->add_option("--lang", c.lang, "vi or en; picks the shipped config when --config is absent")
      ->check(CLI::IsMember({"vi", "en"}));
  cmd->add_flag("--pretagged", c.pretagged, "question is given as word/TAG tokens");
  cmd->add_flag("--json", c.json, "print JSON");
}

std::string data_dir() {
  if (const char* env = std::getenv("KBQA_DATA_DIR")) return env;
  return KBQA_DEFAULT_DATA_DIR;
}

kbqa::EngineConfig config_of(const Common& c) {
  if (c.config.empty() && c.lang.empty()) throw CLI::RequiredError("--config or --lang");
  auto cfg = kbqa::EngineConfig::load(c.config.empty() ? data_dir() + "/config/" + c.lang + ".json"
                                                       : c.config);
  if (!c.lang.empty() && kbqa::parse_language(c.lang) != cfg.language) {
    throw CLI::ValidationError("--lang", "does not match the configuration language");
  }
  return cfg;
}

std::optional<bool> flag(const Common& c) {
  if (c.pretagged) return true;
  return std::nullopt;
}

nlohmann::json read_json_arg(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw kbqa::LookupError("cannot open " + arg.substr(1));
    return nlohmann::json::parse(in);
  }
  return nlohmann::json::parse(arg);
}

void print_answer(const nlohmann::json& r) {
  const auto& a = r.at("answer");
  std::cout << a.at("text").get<std::string>() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kbqa: ontology question answering with ripple-down question analysis"};
  app.require_subcommand(1);

  Common analyze_opts, answer_opts, add_opts, stats_opts, eval_opts, serve_opts;
  std::string question;
  std::vector<std::string> choices;
  std::string rule_text, conclusion;
  std::vector<std::string> extra;
  bool dry_run = false;
  std::string corpus;
  std::string host = "127.0.0.1";
  int port = 8080;

  auto* analyze = app.add_subcommand("analyze", "question -> intermediate representation");
  add_common(analyze, analyze_opts);
  analyze->add_option("question", question)->required();

  auto* answer = app.add_subcommand("answer", "question -> answer");
  add_common(answer, answer_opts);
  answer->add_option("question", question)->required();
  answer->add_option("--choose", choices, "selections for pending choices, in order");

  auto* kb = app.add_subcommand("kb", "knowledge base maintenance");
  kb->require_subcommand(1);
  auto* add_rule = kb->add_subcommand("add-rule", "append an exception rule for a question");
  add_common(add_rule, add_opts);
  add_rule->add_option("--question", question)->required();
  add_rule->add_option("--rule", rule_text, "rule text")->required();
  add_rule->add_option("--extra", extra, "hasAnno constraint");
  add_rule->add_option("--conclusion", conclusion, "conclusion JSON or @file")->required();
  add_rule->add_flag("--dry-run", dry_run);
  auto* stats = kb->add_subcommand("stats", "layer and conclusion histograms");
  add_common(stats, stats_opts);

  auto* eval = app.add_subcommand("eval", "analyze a corpus with expected representations");
  add_common(eval, eval_opts);
  eval->add_option("--corpus", corpus, "JSONL corpus")->required();

  auto* serve = app.add_subcommand("serve", "HTTP service");
  add_common(serve, serve_opts);
  serve->add_option("--host", host);
  serve->add_option("--port", port);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*analyze) {
      kbqa::Engine engine(config_of(analyze_opts));
      auto a = engine.analyze(question, flag(analyze_opts));
      if (analyze_opts.json) {
        std::cout << a.to_json(true).dump(2) << "\n";
      } else {
        std::string path;
        for (auto n : a.eval.path) path += (path.empty() ? "" : "-") + std::to_string(n);
        std::cout << "path: " << path << "  last fired: " << a.eval.last_fired << "\n";
        std::cout << (a.ir ? kbqa::to_text(*a.ir) : "unanalyzed" + (a.error.empty() ? "" : ": " + a.error))
                  << "\n";
      }
      return a.ir ? 0 : kDataError;
    }
    if (*answer) {
      kbqa::Engine engine(config_of(answer_opts));
      auto r = engine.answer(question, flag(answer_opts));
      std::size_t next = 0;
      while (r.at("status") == "choice") {
        const auto& c = r.at("choice");
        std::string pick;
        if (next < choices.size()) {
          pick = choices[next++];
        } else {
          std::cerr << "choose for " << c.at("slot").get<std::string>() << " '"
                    << c.at("term").get<std::string>() << "':\n";
          const auto& cands = c.at("candidates");
          for (std::size_t i = 0; i < cands.size(); ++i) {
            std::cerr << "  " << i + 1 << ") " << cands[i].get<std::string>() << "\n";
          }
          std::string line;
          if (!std::getline(std::cin, line)) return kUsage;
          char* end = nullptr;
          long k = std::strtol(line.c_str(), &end, 10);
          pick = (end && *end == '\0' && k >= 1 && k <= static_cast<long>(cands.size()))
                     ? cands[k - 1].get<std::string>()
                     : line;
        }
        r = engine.resume(r.at("session").get<std::string>(), pick);
      }
      if (answer_opts.json) std::cout << r.dump(2) << "\n";
      else if (r.at("status") == "answer") print_answer(r);
      else std::cout << "unanalyzed\n";
      return r.at("status") == "answer" ? 0 : kDataError;
    }
    if (*add_rule) {
      kbqa::Engine engine(config_of(add_opts));
      kbqa::KbEditRequest req;
      req.question = question;
      req.pretagged = flag(add_opts);
      req.rule_text = rule_text;
      req.extra = extra;
      req.conclusion = read_json_arg(conclusion);
      req.dry_run = dry_run;
      auto r = engine.add_exception(req);
      if (add_opts.json) {
        std::cout << r.dump(2) << "\n";
      } else {
        std::cout << "node " << r.at("node_id") << " attached as " << r.at("edge").get<std::string>()
                  << "-child of node " << r.at("parent") << (dry_run ? " (dry run)" : "") << "\n";
      }
      return 0;
    }
    if (*stats) {
      kbqa::Engine engine(config_of(stats_opts));
      auto s = engine.kb_stats();
      if (stats_opts.json) {
        std::cout << s.dump(2) << "\n";
      } else {
        std::cout << "language " << s.at("language").get<std::string>() << ", " << s.at("rules")
                  << " rules\nlayer\trules\n";
        for (const auto& l : s.at("layers")) std::cout << l.at("layer") << "\t" << l.at("rules") << "\n";
      }
      return 0;
    }
    if (*eval) {
      kbqa::Engine engine(config_of(eval_opts));
      auto report = engine.evaluate_corpus(kbqa::load_corpus(corpus));
      if (eval_opts.json) {
        std::cout << report.dump(2) << "\n";
      } else {
        for (const auto& row : report.at("items")) {
          std::cout << (row.at("pass").get<bool>() ? "PASS " : "FAIL ") << row.at("question").get<std::string>()
                    << "\n";
          if (!row.at("pass").get<bool>()) {
            std::cout << "  expected " << row.at("expected").get<std::string>() << "\n  actual   "
                      << row.at("actual").get<std::string>() << "\n";
          }
        }
        std::cout << "\nstructure\t#questions\tcorrect\n";
        for (const auto& s : report.at("structures")) {
          std::cout << s.at("structure").get<std::string>() << "\t" << s.at("questions") << "\t"
                    << s.at("correct") << "\n";
        }
        std::cout << "\nlayer\trules\n";
        const auto& layers = report.at("layers");
        for (std::size_t i = 1; i < layers.size(); ++i) std::cout << i << "\t" << layers[i] << "\n";
        std::cout << "\n" << report.at("passed") << "/" << report.at("total") << " exact matches\n";
      }
      return 0;
    }
    if (*serve) {
      kbqa::Engine engine(config_of(serve_opts));
      kbqa::HttpService service(engine);
      int bound = service.bind(host, port);
      if (bound < 0) {
        std::cerr << "cannot bind " << host << ":" << port << "\n";
        return kDataError;
      }
      std::cerr << "listening on " << host << ":" << bound << "\n";
      return service.listen() ? 0 : kDataError;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}
