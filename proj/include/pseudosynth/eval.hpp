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

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pseudosynth/assembler.hpp"
#include "pseudosynth/core_types.hpp"
#include "pseudosynth/judge.hpp"

namespace pseudosynth {

class EvalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Compact record of one search run.
struct RunDigest {
  std::string problem;
  std::string method;
  std::size_t budget = 0;
  bool accepted = false;
  std::size_t trials_used = 0;
  std::optional<std::size_t> accepting_trial;
  std::string tag;

  friend bool operator==(const RunDigest&, const RunDigest&) = default;
};

using RunSummary = std::vector<RunDigest>;

/// Fraction of problems accepted within `budget` trials. Throws EvalError if
/// any run had a smaller budget (its outcome at `budget` is unknown).
double success_rate_at_budget(const RunSummary& summary, std::size_t budget);

std::vector<std::pair<std::size_t, double>> success_curve(const RunSummary& summary,
                                                          const std::vector<std::size_t>& budgets);

// ---------------------------------------------------------------------------
// Trial deltas

enum class DeltaCategory { Improves, Worsens, Unchanged, FailToSuccess, SuccessToFail, BothFail };

std::string to_string(DeltaCategory category);

struct DeltaStats {
  std::size_t count = 0;
  double fraction = 0.0;
  std::optional<double> mean_abs;
  std::optional<double> median_abs;
  std::optional<double> geo_mean_rel;
  std::optional<double> median_rel;
};

struct ProblemDelta {
  std::string problem;
  std::string tag;
  DeltaCategory category = DeltaCategory::BothFail;
  std::optional<std::size_t> baseline_trials;
  std::optional<std::size_t> method_trials;
};

struct TrialDeltaReport {
  std::size_t total = 0;
  std::map<DeltaCategory, DeltaStats> categories;
  std::vector<ProblemDelta> problems;  // sorted by problem id
};

/// Compares accepting-trial counts of two runs over the same problems.
/// Differences are method - baseline; relative differences method / baseline.
TrialDeltaReport trial_delta_report(const RunSummary& baseline, const RunSummary& method);

/// Computes the stats block for an arbitrary set of (baseline, method) pairs.
DeltaStats delta_stats(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                       std::size_t total);

std::string format_delta_table(const TrialDeltaReport& report, std::string_view method);
std::string format_success_table(const std::map<std::string, RunSummary>& by_method,
                                 const std::vector<std::size_t>& budgets);
/// Tab-separated curve: "budget\t<method>..." rows.
std::string format_success_curve_tsv(const std::map<std::string, RunSummary>& by_method,
                                     const std::vector<std::size_t>& budgets);

// ---------------------------------------------------------------------------
// Line-level functional correctness

struct LineAccuracy {
  /// correct[line - 1][rank - 1] for ranks up to the largest cutoff.
  std::vector<std::vector<bool>> correct;
  /// False for fixed structural lines, which are not scored.
  std::vector<bool> scored;
  /// Fraction of scored lines with a correct candidate within the top k.
  std::map<std::size_t, double> accuracy_at;
};

inline const std::vector<std::size_t> kDefaultRankCutoffs = {1, 5, 10, 100};

/// Replaces one gold line at a time with each candidate and checks the
/// program against public and hidden tests. Throws EvalError if the gold
/// program itself fails.
LineAccuracy line_level_accuracy(const ProblemInstance& instance,
                                 const std::vector<std::string>& gold_code, Judge& judge,
                                 const std::vector<std::size_t>& rank_cutoffs = kDefaultRankCutoffs,
                                 std::string_view preamble = kDefaultPreamble);

/// Program passes every test (public and hidden) under `judge`.
bool passes_all_tests(Judge& judge, const Program& program, const std::vector<TestCase>& tests);

struct ProgramOracleStats {
  std::size_t top_incorrect_lines = 0;  // top candidate incorrect
  std::size_t no_correct_lines = 0;     // no candidate correct
  bool oracle_solvable = true;
};

ProgramOracleStats oracle_stats(const LineAccuracy& accuracy);

struct OracleSummary {
  std::size_t programs = 0;
  /// Buckets 0, 1, 2, 3, 4+.
  std::vector<std::size_t> top_incorrect_histogram = std::vector<std::size_t>(5, 0);
  /// Buckets 0, 1, 2, 3+.
  std::vector<std::size_t> no_correct_histogram = std::vector<std::size_t>(4, 0);
  double oracle_success_rate = 0.0;
};

OracleSummary summarize_oracle(const std::vector<ProgramOracleStats>& stats);
std::string format_oracle_summary(const OracleSummary& summary,
                                  const std::map<std::size_t, double>& accuracy_at);

}  // namespace pseudosynth
