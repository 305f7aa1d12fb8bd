// Copyright 2026 The Pseudosynth Authors. All rights reserved.
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


#include <benchmark/benchmark.h>

#include "pseudosynth/mock_bench.hpp"
#include "pseudosynth/runner.hpp"

using namespace pseudosynth;

namespace {

const std::vector<MockScenario>& scenarios() {
  static const auto s = mock_benchmark(11, 200, 0.5);
  return s;
}

RunnerConfig config(LocalizerKind kind) {
  RunnerConfig cfg;
  cfg.localizer.kind = kind;
  return cfg;
}

void BM_Serial(benchmark::State& state) {
  auto jobs = mock_jobs(scenarios());
  auto cfg = config(static_cast<LocalizerKind>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_problems_serial(jobs, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(jobs.size()));
}

void BM_Parallel(benchmark::State& state) {
  auto jobs = mock_jobs(scenarios());
  auto cfg = config(static_cast<LocalizerKind>(state.range(0)));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(run_problems(jobs, cfg, workers));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(jobs.size()));
}

}  // namespace

BENCHMARK(BM_Serial)
    ->Arg(static_cast<int>(LocalizerKind::None))
    ->Arg(static_cast<int>(LocalizerKind::Prefix))
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)
    ->ArgsProduct({{static_cast<int>(LocalizerKind::None), static_cast<int>(LocalizerKind::Prefix)},
                   {2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
