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

#include "pseudosynth/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

namespace pseudosynth {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string signed_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.*f", digits, v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool accepted_within(const RunDigest& d, std::size_t budget) {
  return d.accepted && d.accepting_trial && *d.accepting_trial <= budget;
}

std::map<std::string, const RunDigest*> index_by_problem(const RunSummary& summary,
                                                         const char* which) {
  std::map<std::string, const RunDigest*> out;
  for (const RunDigest& d : summary) {
    if (!out.emplace(d.problem, &d).second) {
      throw EvalError(std::string(which) + " summary has duplicate problem '" + d.problem + "'");
    }
  }
  return out;
}

}  // namespace

double success_rate_at_budget(const RunSummary& summary, std::size_t budget) {
  if (summary.empty()) return 0.0;
  std::size_t ok = 0;
  for (const RunDigest& d : summary) {
    if (d.budget < budget) {
      throw EvalError("run for '" + d.problem + "' used budget " + std::to_string(d.budget) +
                      " < " + std::to_string(budget));
    }
    if (accepted_within(d, budget)) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(summary.size());
}

std::vector<std::pair<std::size_t, double>> success_curve(const RunSummary& summary,
                                                          const std::vector<std::size_t>& budgets) {
  std::vector<std::size_t> sorted = budgets;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(sorted.size());
  for (std::size_t b : sorted) out.emplace_back(b, success_rate_at_budget(summary, b));
  return out;
}

std::string to_string(DeltaCategory category) {
  switch (category) {
    case DeltaCategory::Improves: return "improves";
    case DeltaCategory::Worsens: return "worsens";
    case DeltaCategory::Unchanged: return "unchanged";
    case DeltaCategory::FailToSuccess: return "fail_to_success";
    case DeltaCategory::SuccessToFail: return "success_to_fail";
    case DeltaCategory::BothFail: return "both_fail";
  }
  return "unknown";
}

DeltaStats delta_stats(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                       std::size_t total) {
  DeltaStats s;
  s.count = pairs.size();
  s.fraction = total == 0 ? 0.0 : static_cast<double>(pairs.size()) / static_cast<double>(total);
  if (pairs.empty()) return s;

  std::vector<double> abs_diff, rel;
  double log_sum = 0.0;
  for (auto [base, meth] : pairs) {
    abs_diff.push_back(static_cast<double>(meth) - static_cast<double>(base));
    const double r = static_cast<double>(meth) / static_cast<double>(base);
    rel.push_back(r);
    log_sum += std::log(r);
  }
  s.mean_abs = std::accumulate(abs_diff.begin(), abs_diff.end(), 0.0) /
               static_cast<double>(abs_diff.size());
  s.median_abs = median(abs_diff);
  s.geo_mean_rel = std::exp(log_sum / static_cast<double>(rel.size()));
  s.median_rel = median(rel);
  return s;
}

TrialDeltaReport trial_delta_report(const RunSummary& baseline, const RunSummary& method) {
  auto base = index_by_problem(baseline, "baseline");
  auto meth = index_by_problem(method, "method");

  std::set<std::string> base_keys, meth_keys;
  for (auto& [k, _] : base) base_keys.insert(k);
  for (auto& [k, _] : meth) meth_keys.insert(k);
  if (base_keys != meth_keys) {
    std::vector<std::string> only;
    std::set_symmetric_difference(base_keys.begin(), base_keys.end(), meth_keys.begin(),
                                  meth_keys.end(), std::back_inserter(only));
    throw EvalError("problem sets differ (e.g. '" + only.front() + "')");
  }

  TrialDeltaReport report;
  report.total = base.size();
  std::map<DeltaCategory, std::vector<std::pair<std::size_t, std::size_t>>> pairs;
  for (DeltaCategory c : {DeltaCategory::Improves, DeltaCategory::Worsens, DeltaCategory::Unchanged,
                          DeltaCategory::FailToSuccess, DeltaCategory::SuccessToFail,
                          DeltaCategory::BothFail}) {
    pairs[c];
  }

  for (auto& [id, b] : base) {
    const RunDigest* m = meth.at(id);
    if (b->budget != m->budget) {
      throw EvalError("budget mismatch on '" + id + "': " + std::to_string(b->budget) + " vs " +
                      std::to_string(m->budget));
    }
    ProblemDelta pd;
    pd.problem = id;
    pd.tag = !b->tag.empty() ? b->tag : m->tag;
    const bool bs = accepted_within(*b, b->budget);
    const bool ms = accepted_within(*m, m->budget);
    if (bs) pd.baseline_trials = *b->accepting_trial;
    if (ms) pd.method_trials = *m->accepting_trial;

    if (bs && ms) {
      const std::size_t x = *pd.baseline_trials, y = *pd.method_trials;
      pd.category = y < x ? DeltaCategory::Improves
                  : y > x ? DeltaCategory::Worsens
                          : DeltaCategory::Unchanged;
      pairs[pd.category].emplace_back(x, y);
    } else if (ms) {
      pd.category = DeltaCategory::FailToSuccess;
      pairs[pd.category];
    } else if (bs) {
      pd.category = DeltaCategory::SuccessToFail;
    } else {
      pd.category = DeltaCategory::BothFail;
    }
    report.problems.push_back(std::move(pd));
  }

  std::map<DeltaCategory, std::size_t> counts;
  for (const ProblemDelta& pd : report.problems) ++counts[pd.category];
  for (auto& [c, p] : pairs) {
    DeltaStats s = delta_stats(p, report.total);
    s.count = counts[c];
    s.fraction = report.total == 0 ? 0.0
                                   : static_cast<double>(s.count) / static_cast<double>(report.total);
    report.categories[c] = s;
  }
  return report;
}

std::string format_delta_table(const TrialDeltaReport& report, std::string_view method) {
  std::ostringstream out;
  out << "method: " << method << "  (" << report.total << " problems; trials counted as compiles, "
      << "probes included)\n";
  out << "category           count  percent   mean_abs  median_abs  geo_rel  median_rel\n";
  for (auto& [c, s] : report.categories) {
    char row[256];
    auto opt = [](const std::optional<double>& v, bool sign, bool times) -> std::string {
      if (!v) return "-";
      if (times) return "x" + fixed(*v, 2);
      return sign ? signed_fixed(*v, 1) : fixed(*v, 1);
    };
    std::snprintf(row, sizeof row, "%-18s %5zu  %6.1f%%  %9s  %10s  %7s  %10s\n",
                  to_string(c).c_str(), s.count, 100.0 * s.fraction,
                  opt(s.mean_abs, true, false).c_str(), opt(s.median_abs, true, false).c_str(),
                  opt(s.geo_mean_rel, false, true).c_str(), opt(s.median_rel, false, true).c_str());
    out << row;
  }
  return out.str();
}

std::string format_success_table(const std::map<std::string, RunSummary>& by_method,
                                 const std::vector<std::size_t>& budgets) {
  std::ostringstream out;
  out << "success rate (%) at budget B\n";
  char head[64];
  std::snprintf(head, sizeof head, "%-14s", "method");
  out << head;
  for (std::size_t b : budgets) {
    std::snprintf(head, sizeof head, "  B=%-5zu", b);
    out << head;
  }
  out << '\n';
  for (auto& [name, summary] : by_method) {
    std::snprintf(head, sizeof head, "%-14s", name.c_str());
    out << head;
    for (std::size_t b : budgets) {
      std::snprintf(head, sizeof head, "  %7.1f", 100.0 * success_rate_at_budget(summary, b));
      out << head;
    }
    out << '\n';
  }
  return out.str();
}

std::string format_success_curve_tsv(const std::map<std::string, RunSummary>& by_method,
                                     const std::vector<std::size_t>& budgets) {
  std::ostringstream out;
  out << "budget";
  for (auto& [name, _] : by_method) out << '\t' << name;
  out << '\n';
  for (std::size_t b : budgets) {
    out << b;
    for (auto& [_, summary] : by_method) out << '\t' << fixed(success_rate_at_budget(summary, b), 6);
    out << '\n';
  }
  return out.str();
}

bool passes_all_tests(Judge& judge, const Program& program, const std::vector<TestCase>& tests) {
  CompileResult r = judge.compile(program);
  auto* ok = std::get_if<CompileSuccess>(&r);
  if (!ok) return false;
  return is_accepted(run_public_tests(judge, *ok->artifact, tests));
}

LineAccuracy line_level_accuracy(const ProblemInstance& instance,
                                 const std::vector<std::string>& gold_code, Judge& judge,
                                 const std::vector<std::size_t>& rank_cutoffs,
                                 std::string_view preamble) {
  const std::size_t L = instance.num_lines();
  if (gold_code.size() != L) {
    throw EvalError(instance.id + ": gold code has " + std::to_string(gold_code.size()) +
                    " lines, expected " + std::to_string(L));
  }
  if (rank_cutoffs.empty()) throw EvalError("no rank cutoffs");
  const std::size_t max_cut = *std::max_element(rank_cutoffs.begin(), rank_cutoffs.end());

  auto program_for = [&](const std::vector<std::string>& code) {
    Program p;
    p.source = assemble_code(instance.lines, code, preamble);
    p.prefix_len = L;
    return p;
  };

  if (!passes_all_tests(judge, program_for(gold_code), instance.tests)) {
    throw EvalError(instance.id + ": gold program does not pass its tests");
  }

  LineAccuracy acc;
  acc.correct.resize(L);
  acc.scored.resize(L, false);
  std::vector<std::string> code = gold_code;
  for (std::size_t i = 0; i < L; ++i) {
    if (instance.lines[i].is_fixed()) continue;
    acc.scored[i] = true;
    const auto& cands = instance.candidate_lists[i].candidates;
    const std::size_t n = std::min(cands.size(), max_cut);
    for (std::size_t r = 0; r < n; ++r) {
      if (cands[r].code == gold_code[i]) {
        acc.correct[i].push_back(true);
        continue;
      }
      code[i] = cands[r].code;
      acc.correct[i].push_back(passes_all_tests(judge, program_for(code), instance.tests));
    }
    code[i] = gold_code[i];
  }

  std::size_t scored = static_cast<std::size_t>(std::count(acc.scored.begin(), acc.scored.end(), true));
  for (std::size_t k : rank_cutoffs) {
    std::size_t hit = 0;
    for (std::size_t i = 0; i < L; ++i) {
      if (!acc.scored[i]) continue;
      const auto& row = acc.correct[i];
      const std::size_t n = std::min(row.size(), k);
      if (std::find(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n), true) !=
          row.begin() + static_cast<std::ptrdiff_t>(n)) {
        ++hit;
      }
    }
    acc.accuracy_at[k] = scored == 0 ? 1.0 : static_cast<double>(hit) / static_cast<double>(scored);
  }
  return acc;
}

ProgramOracleStats oracle_stats(const LineAccuracy& accuracy) {
  ProgramOracleStats s;
  for (std::size_t i = 0; i < accuracy.correct.size(); ++i) {
    if (i < accuracy.scored.size() && !accuracy.scored[i]) continue;
    const auto& row = accuracy.correct[i];
    if (row.empty() || !row.front()) ++s.top_incorrect_lines;
    if (std::find(row.begin(), row.end(), true) == row.end()) ++s.no_correct_lines;
  }
  s.oracle_solvable = s.no_correct_lines == 0;
  return s;
}

OracleSummary summarize_oracle(const std::vector<ProgramOracleStats>& stats) {
  OracleSummary out;
  out.programs = stats.size();
  std::size_t solvable = 0;
  for (const ProgramOracleStats& s : stats) {
    ++out.top_incorrect_histogram[std::min<std::size_t>(s.top_incorrect_lines, 4)];
    ++out.no_correct_histogram[std::min<std::size_t>(s.no_correct_lines, 3)];
    if (s.oracle_solvable) ++solvable;
  }
  out.oracle_success_rate =
      stats.empty() ? 0.0 : static_cast<double>(solvable) / static_cast<double>(stats.size());
  return out;
}

std::string format_oracle_summary(const OracleSummary& summary,
                                  const std::map<std::size_t, double>& accuracy_at) {
  std::ostringstream out;
  out << "programs: " << summary.programs << '\n';
  out << "line-level accuracy:";
  for (auto& [k, a] : accuracy_at) out << "  top-" << k << '=' << fixed(100.0 * a, 1) << '%';
  out << '\n';
  auto pct = [&](std::size_t n) {
    return summary.programs == 0 ? std::string("0.0")
                                 : fixed(100.0 * static_cast<double>(n) /
                                             static_cast<double>(summary.programs), 1);
  };
  out << "lines with incorrect top candidate per program:\n";
  const char* b_labels[] = {"0", "1", "2", "3", "4+"};
  for (std::size_t i = 0; i < 5; ++i) {
    out << "  " << b_labels[i] << ": " << summary.top_incorrect_histogram[i] << " ("
        << pct(summary.top_incorrect_histogram[i]) << "%)\n";
  }
  out << "lines with no correct candidate per program:\n";
  const char* c_labels[] = {"0", "1", "2", "3+"};
  for (std::size_t i = 0; i < 4; ++i) {
    out << "  " << c_labels[i] << ": " << summary.no_correct_histogram[i] << " ("
        << pct(summary.no_correct_histogram[i]) << "%)\n";
  }
  out << "oracle success rate: " << fixed(100.0 * summary.oracle_success_rate, 1) << "%\n";
  return out.str();
}

}  // namespace pseudosynth
