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

#include "kbqa/engine.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include "kbqa/text.hpp"

namespace kbqa {

namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path x(p);
  return x.is_absolute() || base.empty() ? x : base / x;
}

nlohmann::json ir_or_null(const std::optional<IntermediateRepresentation>& ir) {
  return ir ? to_json(*ir) : nlohmann::json(nullptr);
}

}  // namespace

EngineConfig EngineConfig::from_json(const nlohmann::json& j, const fs::path& base) {
  EngineConfig c;
  try {
    c.language = parse_language(j.at("language").get<std::string>());
    c.kb = resolve(base, j.at("kb").get<std::string>());
    c.ontology = resolve(base, j.at("ontology").get<std::string>());
    for (const auto& l : j.value("lexicons", std::vector<std::string>{})) c.lexicons.push_back(resolve(base, l));
    if (j.contains("synonyms") && !j.at("synonyms").is_null()) {
      c.synonyms = resolve(base, j.at("synonyms").get<std::string>());
    }
    c.threshold = j.value("threshold", 0.8);
    if (j.contains("stop_words") && !j.at("stop_words").is_null()) {
      c.stop_words = j.at("stop_words").get<std::vector<std::string>>();
    }
    c.session_ttl = std::chrono::seconds(j.value("session_ttl_seconds", 1800));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed engine config: ") + e.what());
  }
  return c;
}

EngineConfig EngineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError::located(path.string(), e.what(), 0, static_cast<int>(e.byte));
  }
  return from_json(j, path.parent_path());
}

nlohmann::json EngineConfig::to_json() const {
  nlohmann::json lex = nlohmann::json::array();
  for (const auto& l : lexicons) lex.push_back(l.string());
  return {{"language", kbqa::to_string(language)},
          {"kb", kb.string()},
          {"ontology", ontology.string()},
          {"lexicons", lex},
          {"synonyms", synonyms ? nlohmann::json(synonyms->string()) : nlohmann::json(nullptr)},
          {"threshold", threshold},
          {"stop_words", stop_words ? nlohmann::json(*stop_words) : nlohmann::json(nullptr)},
          {"session_ttl_seconds", session_ttl.count()}};
}

void EngineConfig::validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ValidationError("threshold must lie in (0, 1], got " + std::to_string(threshold));
  }
  std::vector<fs::path> files{kb, ontology};
  files.insert(files.end(), lexicons.begin(), lexicons.end());
  if (synonyms) files.push_back(*synonyms);
  for (const auto& f : files) {
    if (!fs::exists(f)) throw ValidationError("missing file " + f.string());
  }
}

bool looks_pretagged(std::string_view question) {
  auto words = text::split_words(question);
  if (words.empty()) return false;
  for (const auto& w : words) {
    auto slash = w.rfind('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == w.size()) return false;
    for (char c : w.substr(slash + 1)) {
      bool ok = (c >= 'A' && c <= 'Z') || c == '$' || c == '.' ||
                c == ',' || c == ':' || c == '-' || c == '?' || c == '!';
      if (!ok) return false;
    }
  }
  return true;
}

nlohmann::json merge_synonyms(nlohmann::json ontology, std::istream& lines) {
  std::map<std::string, std::vector<std::string>> extra;
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(text::normalize_space(col));
    for (std::size_t i = 1; i < cols.size(); ++i) {
      if (!cols[i].empty()) extra[cols[0]].push_back(cols[i]);
    }
  }
  for (const char* group : {"concepts", "relations", "instances"}) {
    if (!ontology.contains(group)) continue;
    for (auto& e : ontology[group]) {
      auto it = extra.find(e.value("name", ""));
      if (it == extra.end()) continue;
      if (!e.contains("synonyms") || e["synonyms"].is_null()) e["synonyms"] = nlohmann::json::array();
      for (const auto& s : it->second) e["synonyms"].push_back(s);
    }
  }
  return ontology;
}

nlohmann::json Analysis::to_json(bool with_annotations) const {
  nlohmann::json j = {{"status", ir ? "analyzed" : "unanalyzed"},
                      {"question", doc.text()},
                      {"ir", ir_or_null(ir)},
                      {"ir_text", ir ? to_text(*ir) : std::string()},
                      {"path", eval.path},
                      {"fired", eval.fired},
                      {"last_fired", eval.last_fired}};
  if (!error.empty()) j["error"] = error;
  if (with_annotations) j["document"] = doc.to_json();
  return j;
}

KbEditRequest KbEditRequest::from_json(const nlohmann::json& j) {
  KbEditRequest r;
  try {
    r.question = j.at("question").get<std::string>();
    if (j.contains("pretagged") && !j.at("pretagged").is_null()) r.pretagged = j.at("pretagged").get<bool>();
    r.rule_text = j.at("rule_text").get<std::string>();
    r.extra = j.value("extra", std::vector<std::string>{});
    r.conclusion = j.at("conclusion");
    r.dry_run = j.value("dry_run", false);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed exception request: ") + e.what());
  }
  return r;
}

std::vector<CorpusItem> parse_corpus(std::istream& in, const std::string& source) {
  std::vector<CorpusItem> items;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto trimmed = text::normalize_space(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    try {
      auto j = nlohmann::json::parse(trimmed);
      CorpusItem it;
      it.line = n;
      it.question = j.at("question").get<std::string>();
      if (j.contains("pretagged") && !j.at("pretagged").is_null()) it.pretagged = j.at("pretagged").get<bool>();
      it.expected = ir_from_json(j.at("expected"));
      items.push_back(std::move(it));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError::located(source, e.what(), static_cast<int>(n), 1);
    } catch (const ValidationError& e) {
      throw ParseError::located(source, e.what(), static_cast<int>(n), 1);
    }
  }
  return items;
}

std::vector<CorpusItem> load_corpus(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open corpus " + path.string());
  return parse_corpus(in, path.string());
}

// ------------------------------------------------------------------ engine

namespace {

onto::Ontology load_ontology(const EngineConfig& cfg) {
  std::ifstream in(cfg.ontology);
  if (!in) throw LookupError("cannot open ontology " + cfg.ontology.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError::located(cfg.ontology.string(), e.what(), 0, static_cast<int>(e.byte));
  }
  if (cfg.synonyms) {
    std::ifstream syn(*cfg.synonyms);
    if (!syn) throw LookupError("cannot open synonyms " + cfg.synonyms->string());
    j = merge_synonyms(std::move(j), syn);
  }
  try {
    return onto::Ontology::from_json(j);
  } catch (const ValidationError& e) {
    throw ValidationError(cfg.ontology.string() + ": " + e.what());
  }
}

pipeline::Lexicon load_lexicons(const EngineConfig& cfg) {
  pipeline::Lexicon lex;
  for (const auto& p : cfg.lexicons) {
    auto loaded = pipeline::Lexicon::load(p);
    for (const auto& e : loaded.entries()) lex.add(e);
  }
  return lex;
}

pipeline::PhraseTypeDictionary concept_dictionary(const onto::Ontology& ont) {
  pipeline::PhraseTypeDictionary d;
  for (const auto& c : ont.concepts()) {
    d.add(c.name);
    for (const auto& s : c.synonyms) d.add(s);
  }
  return d;
}

scrdr::KnowledgeBase load_checked_kb(const EngineConfig& cfg) {
  cfg.validate();
  auto kb = scrdr::load_kb(cfg.kb);
  if (kb.language() != cfg.language) {
    throw ValidationError("knowledge base " + cfg.kb.string() + " is for language " +
                          to_string(kb.language()));
  }
  return kb;
}

}  // namespace

Engine::Engine(EngineConfig cfg)
    : Engine(cfg, load_checked_kb(cfg), load_ontology(cfg), load_lexicons(cfg)) {}

Engine::Engine(EngineConfig cfg, scrdr::KnowledgeBase kb, onto::Ontology ont,
               pipeline::Lexicon lexicon)
    : cfg_(std::move(cfg)),
      ont_(std::move(ont)),
      pipeline_(cfg_.language, std::move(lexicon), concept_dictionary(ont_)),
      kb_(std::make_shared<const scrdr::KnowledgeBase>(std::move(kb))) {}

std::shared_ptr<const scrdr::KnowledgeBase> Engine::kb() const {
  std::shared_lock lock(kb_mutex_);
  return kb_;
}

Document Engine::annotate(std::string_view question, std::optional<bool> pretagged) const {
  return pipeline_.run(question, pretagged.value_or(looks_pretagged(question)));
}

Analysis Engine::analyze(std::string_view question, std::optional<bool> pretagged) const {
  auto kb = this->kb();
  Analysis a{annotate(question, pretagged), {}, std::nullopt, {}};
  try {
    a.eval = scrdr::evaluate(*kb, a.doc);
    a.ir = a.eval.conclusion;
  } catch (const InstantiationError& e) {
    a.error = e.what();
  }
  return a;
}

mapping::MapperConfig Engine::mapper_config() const {
  auto m = mapping::MapperConfig::for_language(cfg_.language);
  m.threshold = cfg_.threshold;
  if (cfg_.stop_words) m.stop_words = *cfg_.stop_words;
  return m;
}

std::string Engine::new_session_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::ostringstream ss;
  ss << std::hex << rng() << '-' << ++session_counter_;
  return ss.str();
}

nlohmann::json Engine::answer(std::string_view question, std::optional<bool> pretagged) {
  Analysis a = analyze(question, pretagged);
  if (!a.ir) {
    auto j = a.to_json(false);
    j["status"] = "unanalyzed";
    return j;
  }
  auto problems = validate_ir(*a.ir);
  if (!problems.empty()) {
    std::string msg = "invalid intermediate representation";
    for (const auto& p : problems) msg += "; " + p;
    throw ValidationError(msg);
  }
  auto s = std::make_shared<Session>();
  s->question = std::string(question);
  s->ir = *a.ir;
  s->created = std::chrono::steady_clock::now();
  std::lock_guard lock(s->lock);
  auto out = advance(s);
  out["path"] = a.eval.path;
  return out;
}

nlohmann::json Engine::advance(const std::shared_ptr<Session>& sp) {
  Session& s = *sp;
  auto m = mapping::map_ir(s.ir, ont_, mapper_config(), s.choices);
  nlohmann::json out = {{"question", s.question}, {"ir", to_json(s.ir)}, {"ir_text", to_text(s.ir)}};
  if (auto* p = std::get_if<mapping::PendingChoice>(&m)) {
    s.pending = *p;
    if (s.id.empty()) {
      std::lock_guard lock(session_mutex_);
      s.id = new_session_id();
      sessions_.emplace(s.id, sp);
    }
    out["status"] = "choice";
    out["session"] = s.id;
    out["choice"] = to_json(*p);
    return out;
  }
  const auto& tuples = std::get<std::vector<mapping::OntologyTuple>>(m);
  auto result = answer::answer_ir(s.ir.structure, tuples, ont_);
  auto rendered = answer::render(s.ir.tuples.front().category, result);
  for (const auto& t : tuples) rendered.provenance.push_back(mapping::to_json(t));
  s.pending.reset();
  s.done = true;
  out["status"] = "answer";
  out["answer"] = answer::to_json(rendered);
  if (!s.id.empty()) out["session"] = s.id;
  return out;
}

nlohmann::json Engine::resume(const std::string& session_id, std::string_view selection) {
  std::shared_ptr<Session> s;
  {
    std::lock_guard lock(session_mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw LookupError("unknown session '" + session_id + "'");
    s = it->second;
    if (std::chrono::steady_clock::now() - s->created > cfg_.session_ttl) {
      sessions_.erase(it);
      throw SessionExpired("session '" + session_id + "' expired");
    }
  }
  std::lock_guard lock(s->lock);
  if (s->done || !s->pending) throw SessionExpired("session '" + session_id + "' is already complete");
  mapping::resolve_choice(*s->pending, selection, s->choices);
  return advance(s);
}

std::size_t Engine::session_count() const {
  std::lock_guard lock(session_mutex_);
  return sessions_.size();
}

namespace {

nlohmann::json safe_eval(const scrdr::KnowledgeBase& kb, Document doc) {
  try {
    auto r = scrdr::evaluate(kb, doc);
    return {{"path", r.path}, {"last_fired", r.last_fired}, {"ir", ir_or_null(r.conclusion)}};
  } catch (const InstantiationError& e) {
    return {{"path", nullptr}, {"ir", nullptr}, {"error", e.what()}};
  }
}

}  // namespace

nlohmann::json Engine::add_exception(const KbEditRequest& req) {
  std::lock_guard writer(write_mutex_);
  scrdr::KnowledgeBase next = *kb();
  Document doc = annotate(req.question, req.pretagged);
  auto builder = [this](std::string_view q) { return annotate(q); };

  auto before = safe_eval(next, doc);
  std::map<scrdr::NodeId, nlohmann::json> stored;
  for (const auto& [id, n] : next.nodes()) {
    if (n.cornerstone) stored[id] = safe_eval(next, annotate(*n.cornerstone));
  }

  ConclusionTemplate concl;
  try {
    concl = template_from_json(req.conclusion);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed conclusion: ") + e.what());
  }
  scrdr::RuleDraft draft{req.rule_text, req.extra, concl};
  scrdr::NodeId id = scrdr::add_exception(next, doc, req.question, draft, builder);

  nlohmann::json report = nlohmann::json::array();
  bool all_same = true;
  for (const auto& [nid, prior] : stored) {
    auto now = safe_eval(next, annotate(*next.node(nid).cornerstone));
    bool same = now["ir"] == prior["ir"];
    all_same = all_same && same;
    report.push_back({{"node", nid}, {"question", *next.node(nid).cornerstone},
                      {"before", prior["ir"]}, {"after", now["ir"]}, {"unchanged", same}});
  }
  const auto& parent = std::find_if(next.nodes().begin(), next.nodes().end(), [&](const auto& kv) {
    return kv.second.except_child == id || kv.second.false_child == id;
  })->second;

  nlohmann::json out = {{"node_id", id},
                        {"parent", parent.id},
                        {"edge", parent.except_child == id ? "except" : "false"},
                        {"before", before},
                        {"after", safe_eval(next, doc)},
                        {"cornerstones", report},
                        {"consistent", all_same},
                        {"dry_run", req.dry_run}};
  if (!req.dry_run) {
    scrdr::persist_kb(next, cfg_.kb);
    std::unique_lock lock(kb_mutex_);
    kb_ = std::make_shared<const scrdr::KnowledgeBase>(std::move(next));
  }
  return out;
}

nlohmann::json Engine::evaluate_corpus(const std::vector<CorpusItem>& items) const {
  const auto& trim = SurfaceTrim::for_language(cfg_.language);
  nlohmann::json rows = nlohmann::json::array();
  std::map<std::string, std::pair<int, int>> by_structure;
  int passed = 0;
  for (const auto& it : items) {
    auto t0 = std::chrono::steady_clock::now();
    Analysis a = analyze(it.question, it.pretagged);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    bool ok = a.ir && ir_matches(it.expected, *a.ir, trim);
    passed += ok;
    auto& h = by_structure[to_string(it.expected.structure)];
    ++h.first;
    h.second += ok;
    nlohmann::json row = {{"line", it.line},      {"question", it.question},
                          {"pass", ok},           {"expected", to_text(it.expected)},
                          {"actual", a.ir ? to_text(*a.ir) : std::string("(unanalyzed)")},
                          {"path", a.eval.path},  {"millis", ms}};
    if (!a.error.empty()) row["error"] = a.error;
    rows.push_back(row);
  }
  nlohmann::json structures = nlohmann::json::array();
  for (QuestionStructure s : kAllStructures) {
    auto it = by_structure.find(to_string(s));
    if (it == by_structure.end()) continue;
    structures.push_back({{"structure", to_string(s)}, {"questions", it->second.first},
                          {"correct", it->second.second}});
  }
  return {{"total", items.size()},
          {"passed", passed},
          {"failed", static_cast<int>(items.size()) - passed},
          {"items", rows},
          {"structures", structures},
          {"layers", scrdr::layer_histogram(*kb())}};
}

nlohmann::json Engine::kb_stats() const {
  auto kb = this->kb();
  auto hist = scrdr::layer_histogram(*kb);
  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t i = 1; i < hist.size(); ++i) layers.push_back({{"layer", i}, {"rules", hist[i]}});
  std::map<std::string, int> concl;
  for (const auto& [id, n] : kb->nodes()) {
    (void)id;
    if (n.conclusion) ++concl[to_string(n.conclusion->structure)];
  }
  return {{"language", to_string(kb->language())},
          {"nodes", kb->size()},
          {"rules", kb->size() - 1},
          {"layers", layers},
          {"conclusions", concl}};
}

nlohmann::json Engine::ontology_summary() const {
  nlohmann::json concepts = nlohmann::json::array();
  for (const auto& c : ont_.concepts()) {
    concepts.push_back({{"name", c.name}, {"instances", ont_.instances_of(c.name, true).size()}});
  }
  nlohmann::json relations = nlohmann::json::array();
  for (const auto& r : ont_.relations()) relations.push_back(r.name);
  return {{"concepts", ont_.concepts().size()},
          {"relations", ont_.relations().size()},
          {"instances", ont_.instances().size()},
          {"assertions", ont_.assertions().size()},
          {"concept_list", concepts},
          {"relation_list", relations}};
}

}  // namespace kbqa
