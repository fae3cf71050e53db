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


#include <fstream>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "kbqa/engine.hpp"
#include "kbqa/error.hpp"
#include "support.hpp"

using namespace kbqa;
using kbqa_test::data_dir;
using kbqa_test::ScratchData;

namespace {

nlohmann::json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

void write_json(const std::filesystem::path& p, const nlohmann::json& j) {
  std::ofstream(p) << j.dump(1);
}

// Subjects s with (s, r, o) asserted, read straight from the ontology file.
std::set<std::string> raw_subjects(const nlohmann::json& onto, const std::string& r,
                                   const std::string& o) {
  std::set<std::string> out;
  for (const auto& a : onto["assertions"]) {
    if (a["r"] == r && a["o"] == o) out.insert(a["s"].get<std::string>());
  }
  return out;
}

std::set<std::string> items(const nlohmann::json& answer) {
  std::set<std::string> s;
  for (const auto& i : answer["answer"]["items"]) s.insert(i.get<std::string>());
  return s;
}

const char* kResearchers =
    "Who/WP are/VBP the/DT researchers/NNS in/IN semantic/JJ web/NN research/NN area/NN ?/.";
const char* kUniversities =
    "Which/WDT universities/NNS are/VBP Knowledge/NNP Media/NNP Institute/NNP collaborating/VBG "
    "with/IN ?/.";

KbEditRequest rule_one(const std::string& question) {
  auto node = read_json(data_dir() / "kb/en.json")["nodes"][1];
  KbEditRequest r;
  r.question = question;
  r.rule_text = node["rule_text"];
  r.conclusion = node["conclusion"];
  return r;
}

// Engine over a scratch copy whose English KB holds only the default node.
EngineConfig empty_kb_config(const ScratchData& s) {
  auto kb = s.path("kb/en.json");
  scrdr::persist_kb(scrdr::new_kb(Language::kEn), kb);
  return EngineConfig::load(s.path("config/en.json"));
}

}  // namespace

TEST(Config, LoadResolvesRelativePaths) {
  auto c = EngineConfig::load(data_dir() / "config/vi.json");
  EXPECT_EQ(c.language, Language::kVi);
  EXPECT_TRUE(std::filesystem::exists(c.kb));
  EXPECT_TRUE(c.synonyms.has_value());
  EXPECT_EQ(c.session_ttl, std::chrono::seconds(1800));
  EXPECT_NO_THROW(c.validate());
  auto back = EngineConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
}

TEST(Config, Errors) {
  EXPECT_THROW(EngineConfig::load(data_dir() / "config/nope.json"), LookupError);
  auto c = EngineConfig::load(data_dir() / "config/en.json");
  c.threshold = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  c.threshold = 1.5;
  EXPECT_THROW(c.validate(), ValidationError);
  c.threshold = 0.8;
  c.kb = data_dir() / "kb/missing.json";
  EXPECT_THROW(c.validate(), ValidationError);
  EXPECT_THROW(Engine{c}, ValidationError);
  EXPECT_THROW(EngineConfig::from_json({{"language", "en"}}), ValidationError);
  auto mismatch = EngineConfig::load(data_dir() / "config/en.json");
  mismatch.kb = data_dir() / "kb/vi.json";
  EXPECT_THROW(Engine{mismatch}, ValidationError);
}

TEST(Helpers, PretaggedDetectionAndSynonyms) {
  EXPECT_TRUE(looks_pretagged("Who/WP are/VBP ?/."));
  EXPECT_FALSE(looks_pretagged("Who are you ?"));
  EXPECT_FALSE(looks_pretagged("and/or"));
  EXPECT_FALSE(looks_pretagged(""));
  std::istringstream lines("# c\nstudent\tpupil\tlearner\nghost\tboo\n");
  auto j = merge_synonyms({{"concepts", {{{"name", "student"}}}}}, lines);
  EXPECT_EQ(j["concepts"][0]["synonyms"], (nlohmann::json{"pupil", "learner"}));
}

TEST(Corpus, ParsesAndReportsLines) {
  std::istringstream ok(
      "# header\n\n"
      R"({"question": "q", "expected": {"structure": "Normal", "tuples": [{"sub": "Normal", "cat": "List", "t1": "a", "rel": "b", "t2": "c", "t3": null}]}})"
      "\n");
  auto items = parse_corpus(ok);
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0].line, 3u);
  EXPECT_FALSE(items[0].pretagged.has_value());
  std::istringstream bad("{\"question\": \"q\"}\n");
  try {
    parse_corpus(bad, "c.jsonl");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(std::string(e.what()).rfind("c.jsonl:1:", 0), 0u);
  }
  EXPECT_THROW(load_corpus(data_dir() / "corpus/none.jsonl"), LookupError);
}

TEST(EngineAnswer, IntersectionOfTwoConditions) {
  Engine e(EngineConfig::load(data_dir() / "config/vi.json"));
  auto out = e.answer("Liệt kê tất cả sinh viên học lớp K50 khoa học máy tính mà có quê ở Hà Nội");
  ASSERT_EQ(out["status"], "answer") << out.dump(1);
  EXPECT_EQ(out["ir"]["structure"], "And");
  auto onto = read_json(data_dir() / "ontology/university_vi.json");
  auto in_class = raw_subjects(onto, "học", "lớp K50 khoa học máy tính");
  auto from_hanoi = raw_subjects(onto, "có quê", "Hà Nội");
  std::set<std::string> both;
  std::set_intersection(in_class.begin(), in_class.end(), from_hanoi.begin(), from_hanoi.end(),
                        std::inserter(both, both.end()));
  EXPECT_EQ(items(out), both);
  EXPECT_EQ(both.size(), 2u);
  EXPECT_EQ(e.session_count(), 0u);
}

TEST(EngineAnswer, ChoiceSessionResumes) {
  Engine e(EngineConfig::load(data_dir() / "config/vi.json"));
  auto first = e.answer("Liệt kê tất cả các sinh viên học lớp khoa học máy tính");
  ASSERT_EQ(first["status"], "choice") << first.dump(1);
  auto sid = first["session"].get<std::string>();
  EXPECT_EQ(first["choice"]["slot"], "term2");
  EXPECT_EQ(first["choice"]["candidates"],
            (nlohmann::json{"lớp K50 khoa học máy tính", "bộ môn khoa học máy tính"}));
  EXPECT_EQ(e.session_count(), 1u);

  EXPECT_THROW(e.resume(sid, "khoa Toán"), ValidationError);
  auto done = e.resume(sid, "lớp K50 khoa học máy tính");
  ASSERT_EQ(done["status"], "answer");
  auto onto = read_json(data_dir() / "ontology/university_vi.json");
  EXPECT_EQ(items(done), raw_subjects(onto, "học", "lớp K50 khoa học máy tính"));
  EXPECT_THROW(e.resume(sid, "lớp K50 khoa học máy tính"), SessionExpired);
  EXPECT_THROW(e.resume("no-such-session", "x"), LookupError);
}

TEST(EngineAnswer, SessionsExpire) {
  ScratchData s;
  auto cfg = read_json(s.path("config/vi.json"));
  cfg["session_ttl_seconds"] = 0;
  write_json(s.path("config/vi.json"), cfg);
  Engine e(EngineConfig::load(s.path("config/vi.json")));
  auto first = e.answer("Liệt kê tất cả các sinh viên học lớp khoa học máy tính");
  ASSERT_EQ(first["status"], "choice");
  std::this_thread::sleep_for(std::chrono::milliseconds(5));
  EXPECT_THROW(e.resume(first["session"], "lớp K50 khoa học máy tính"), SessionExpired);
  EXPECT_EQ(e.session_count(), 0u);
}

TEST(EngineAnswer, UnanalyzedAndUnsupported) {
  Engine e(EngineConfig::load(data_dir() / "config/en.json"));
  auto out = e.answer("xyzzy");
  EXPECT_EQ(out["status"], "unanalyzed");
  Engine vi(EngineConfig::load(data_dir() / "config/vi.json"));
  EXPECT_THROW(vi.answer("sinh viên nào có điểm trung bình cao nhất khoa công nghệ thông tin ?"), UnsupportedError);
}

TEST(EngineKb, AddExceptionPersistsAndReloads) {
  ScratchData s;
  auto cfg = empty_kb_config(s);
  Engine e(cfg);

  auto req = rule_one(kResearchers);
  req.dry_run = true;
  auto dry = e.add_exception(req);
  EXPECT_EQ(dry["node_id"], 1);
  EXPECT_EQ(e.kb()->size(), 1u);
  EXPECT_EQ(scrdr::load_kb(cfg.kb).size(), 1u);

  req.dry_run = false;
  auto out = e.add_exception(req);
  EXPECT_EQ(out["node_id"], 1);
  EXPECT_EQ(out["parent"], 0);
  EXPECT_EQ(out["edge"], "except");
  EXPECT_TRUE(out["before"]["ir"].is_null());
  EXPECT_EQ(out["after"]["ir"]["structure"], "UnknTerm");
  EXPECT_EQ(e.kb()->size(), 2u);

  Engine reloaded(EngineConfig::load(s.path("config/en.json")));
  EXPECT_EQ(reloaded.kb()->size(), 2u);
  EXPECT_EQ(reloaded.kb()->node(1).cornerstone, kResearchers);
  auto a = reloaded.analyze(kResearchers);
  ASSERT_TRUE(a.ir);
  EXPECT_EQ(a.eval.last_fired, 1);
}

TEST(EngineKb, AddExceptionReportsConflicts) {
  ScratchData s;
  Engine e(empty_kb_config(s));
  e.add_exception(rule_one(kResearchers));

  KbEditRequest loose;
  loose.question = kUniversities;
  loose.rule_text = "({RDR1_}):left --> :left.RDR3_ = {category1 = \"Normal\"}";
  loose.conclusion = {{"structure", "Normal"},
                      {"tuples",
                       {{"RDR3_.category1", "RDR1_QP.QuestionPhrase.category", "RDR1_QP",
                         "RDR1_Rel", "RDR1_NP", "?"}}}};
  try {
    e.add_exception(loose);
    FAIL() << "expected ConsistencyError";
  } catch (const ConsistencyError& err) {
    EXPECT_EQ(err.node_id(), 1);
    EXPECT_EQ(err.cornerstone(), kResearchers);
  }
  EXPECT_EQ(e.kb()->size(), 2u);

  KbEditRequest silent = loose;
  silent.rule_text = "({Token.string == \"zzz\"}):left --> :left.RDR3_ = {category1 = \"Normal\"}";
  EXPECT_THROW(e.add_exception(silent), RuleRejected);
  KbEditRequest broken = loose;
  broken.rule_text = "({RDR1_}:left -->";
  EXPECT_THROW(e.add_exception(broken), ParseError);
  EXPECT_THROW(KbEditRequest::from_json({{"question", "q"}}), ValidationError);
}

TEST(EngineReports, CorpusAndStats) {
  Engine e(EngineConfig::load(data_dir() / "config/en.json"));
  auto items = load_corpus(data_dir() / "corpus/en.jsonl");
  auto rep = e.evaluate_corpus(items);
  EXPECT_EQ(rep["total"], items.size());
  EXPECT_EQ(rep["passed"], items.size()) << rep.dump(1);
  int counted = 0;
  for (const auto& row : rep["structures"]) counted += row["questions"].get<int>();
  EXPECT_EQ(counted, static_cast<int>(items.size()));
  EXPECT_EQ(rep["layers"], (nlohmann::json{1, 3, 5, 2, 1, 3}));

  auto st = e.kb_stats();
  EXPECT_EQ(st["rules"], 14);
  ASSERT_EQ(st["layers"].size(), 5u);
  EXPECT_EQ(st["layers"][0], (nlohmann::json{{"layer", 1}, {"rules", 3}}));

  auto raw = read_json(data_dir() / "ontology/kmi_en.json");
  auto sum = e.ontology_summary();
  EXPECT_EQ(sum["instances"], raw["instances"].size());
  EXPECT_EQ(sum["assertions"], raw["assertions"].size());
}
