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

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pseudosynth/eval.hpp"
#include "pseudosynth/localization.hpp"
#include "pseudosynth/mock_judge.hpp"
#include "pseudosynth/search.hpp"
#include "pseudosynth/trace_io.hpp"

namespace pseudosynth {

enum class LocalizerKind { None, Reported, Prefix, Classifier };

std::string to_string(LocalizerKind kind);
std::optional<LocalizerKind> parse_localizer_kind(std::string_view name);

struct LocalizerOptions {
  LocalizerKind kind = LocalizerKind::None;
  double beta = 0.95;
  /// Classifier process argv; empty selects the built-in heuristic.
  std::vector<std::string> classifier_command;
  std::string preamble = std::string(kDefaultPreamble);
};

/// Fresh localizer for one run; null for LocalizerKind::None.
std::unique_ptr<Localizer> make_localizer(const LocalizerOptions& options);

struct RunJob {
  const ProblemInstance* instance = nullptr;
  std::string tag;
  /// Called once per run, on the worker that executes it.
  std::function<std::unique_ptr<Judge>()> make_judge;
};

struct RunnerConfig {
  SearchConfig search;
  LocalizerOptions localizer;
  /// Method name recorded in traces and digests; defaults to the localizer name.
  std::string method;
  /// When unset each job uses its instance's budget.
  std::optional<std::size_t> budget;
  std::uint64_t seed = 0;
  /// Re-check accepted programs against hidden tests.
  bool validate_hidden = true;
};

struct RunOutcome {
  RunHeader header;
  SearchResult result;
  std::optional<bool> hidden_passed;
  std::string error;  // setup failure outside the search itself
};

std::vector<RunOutcome> run_problems_serial(const std::vector<RunJob>& jobs,
                                            const RunnerConfig& config);

/// Same results as run_problems_serial, with runs spread over `workers`
/// OpenMP threads (0 = runtime default). Runs share no mutable state.
std::vector<RunOutcome> run_problems(const std::vector<RunJob>& jobs, const RunnerConfig& config,
                                     int workers = 0);

RunSummary digests(const std::vector<RunOutcome>& outcomes);

/// Jobs judged by a MockJudge built from each scenario's spec.
std::vector<RunJob> mock_jobs(const std::vector<MockScenario>& scenarios);

}  // namespace pseudosynth
