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


#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include <benchmark/benchmark.h>

#include "kbqa/engine.hpp"
#include "kbqa/mapper.hpp"
#include "kbqa/pattern.hpp"

namespace {

const std::filesystem::path kData = KBQA_BENCH_DATA_DIR;
const char* kPartners = "Who/WP are/VBP the/DT partners/NNS involved/VBN in/IN AKT/NNP project/NN ?/.";
const char* kAndVi = "Liệt kê tất cả sinh viên học lớp K50 khoa học máy tính mà có quê ở Hà Nội";

kbqa::Engine& engine(const char* config) {
  static std::map<std::string, std::unique_ptr<kbqa::Engine>> engines;
  auto& e = engines[config];
  if (!e) e = std::make_unique<kbqa::Engine>(kbqa::EngineConfig::load(kData / config));
  return *e;
}

void BM_Similarity(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(kbqa::mapping::similarity("lớp khoa học máy tính", "lớp K50 khoa học máy tính"));
  }
}
BENCHMARK(BM_Similarity);

void BM_AnchoredMatch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::string text;
  for (int i = 0; i < n; ++i) text += i ? " x" : "x";
  kbqa::Document doc(text);
  for (int i = 0; i < n; ++i) {
    auto at = static_cast<std::size_t>(2 * i);
    doc.add("Tok", {at, at + 1});
    doc.add(i % 2 ? "A" : "B", {at, at + 1});
    if (i + 1 < n) doc.add("C", {at, at + 3});
  }
  auto node = kbqa::pattern::parse_condition("(({A} | {B} | {C})+ ({A} | {B})?):left");
  for (auto _ : state) benchmark::DoNotOptimize(kbqa::pattern::anchored_span(doc, node, "Tok"));
  state.SetComplexityN(n);
}
BENCHMARK(BM_AnchoredMatch)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_Annotate(benchmark::State& state) {
  auto& e = engine("config/vi.json");
  for (auto _ : state) benchmark::DoNotOptimize(e.annotate(kAndVi, false));
}
BENCHMARK(BM_Annotate);

void BM_Analyze(benchmark::State& state) {
  auto& e = engine("config/en.json");
  for (auto _ : state) benchmark::DoNotOptimize(e.analyze(kPartners, true));
}
BENCHMARK(BM_Analyze);

void BM_Answer(benchmark::State& state) {
  auto& e = engine("config/vi.json");
  for (auto _ : state) benchmark::DoNotOptimize(e.answer(kAndVi, false));
}
BENCHMARK(BM_Answer);

}  // namespace

BENCHMARK_MAIN();
