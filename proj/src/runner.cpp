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

#include "pseudosynth/runner.hpp"

#include <exception>

#include <omp.h>

namespace pseudosynth {

std::string to_string(LocalizerKind kind) {
  switch (kind) {
    case LocalizerKind::None: return "none";
    case LocalizerKind::Reported: return "reported";
    case LocalizerKind::Prefix: return "prefix";
    case LocalizerKind::Classifier: return "classifier";
  }
  return "unknown";
}

std::optional<LocalizerKind> parse_localizer_kind(std::string_view name) {
  if (name == "none") return LocalizerKind::None;
  if (name == "reported") return LocalizerKind::Reported;
  if (name == "prefix") return LocalizerKind::Prefix;
  if (name == "classifier") return LocalizerKind::Classifier;
  return std::nullopt;
}

std::unique_ptr<Localizer> make_localizer(const LocalizerOptions& options) {
  switch (options.kind) {
    case LocalizerKind::None: return nullptr;
    case LocalizerKind::Reported: return std::make_unique<ReportedLineLocalizer>();
    case LocalizerKind::Prefix: return std::make_unique<PrefixPruningLocalizer>(options.preamble);
    case LocalizerKind::Classifier: {
      std::shared_ptr<ClassifierBackend> backend;
      if (options.classifier_command.empty())
        backend = std::make_shared<HeuristicClassifierBackend>();
      else
        backend = std::make_shared<ProcessClassifierBackend>(options.classifier_command);
      return std::make_unique<ClassifierLocalizer>(std::move(backend), options.beta);
    }
  }
  return nullptr;
}

namespace {

RunOutcome run_one(const RunJob& job, const RunnerConfig& config) {
  RunOutcome out;
  const ProblemInstance& instance = *job.instance;
  SearchConfig sc = config.search;
  sc.budget = config.budget.value_or(instance.budget);
  out.header.problem = instance.id;
  out.header.method = config.method.empty() ? to_string(config.localizer.kind) : config.method;
  out.header.tag = job.tag;
  out.header.budget = sc.budget;
  out.header.alpha = sc.alpha;
  out.header.seed = config.seed;
  try {
    std::unique_ptr<Judge> judge = job.make_judge();
    std::unique_ptr<Localizer> localizer = make_localizer(config.localizer);
    out.result = best_first_search(instance.without_hidden_tests(), *judge, localizer.get(), sc);

    const auto hidden = instance.hidden_tests();
    if (config.validate_hidden && !hidden.empty() &&
        out.result.status == SearchStatus::Accepted && out.result.program) {
      Program p{*out.result.program, out.result.program_selection, instance.num_lines()};
      out.hidden_passed = passes_all_tests(*judge, p, hidden);
    }
  } catch (const std::exception& e) {
    out.error = e.what();
    out.result.status = SearchStatus::InfrastructureFailure;
    out.result.error = e.what();
  }
  return out;
}

}  // namespace

std::vector<RunOutcome> run_problems_serial(const std::vector<RunJob>& jobs,
                                            const RunnerConfig& config) {
  std::vector<RunOutcome> out;
  out.reserve(jobs.size());
  for (const RunJob& job : jobs) out.push_back(run_one(job, config));
  return out;
}

std::vector<RunOutcome> run_problems(const std::vector<RunJob>& jobs, const RunnerConfig& config,
                                     int workers) {
  std::vector<RunOutcome> out(jobs.size());
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = run_one(jobs[static_cast<std::size_t>(i)], config);
  }
  return out;
}

RunSummary digests(const std::vector<RunOutcome>& outcomes) {
  RunSummary out;
  out.reserve(outcomes.size());
  for (const RunOutcome& o : outcomes) out.push_back(make_digest(o.header, o.result));
  return out;
}

std::vector<RunJob> mock_jobs(const std::vector<MockScenario>& scenarios) {
  std::vector<RunJob> jobs;
  jobs.reserve(scenarios.size());
  for (const MockScenario& sc : scenarios) {
    RunJob job;
    job.instance = &sc.instance;
    job.tag = sc.tag;
    job.make_judge = [&sc] { return std::make_unique<MockJudge>(sc.instance, sc.spec); };
    jobs.push_back(std::move(job));
  }
  return jobs;
}

}  // namespace pseudosynth
