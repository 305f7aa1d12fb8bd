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


// Acceptance suite: one PASS/FAIL/SKIP line per criterion. Exit status is
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "pseudosynth/dataset.hpp"
#include "pseudosynth/eval.hpp"
#include "pseudosynth/localization.hpp"
#include "pseudosynth/mock_bench.hpp"
#include "pseudosynth/mock_judge.hpp"
#include "pseudosynth/real_judge.hpp"
#include "pseudosynth/runner.hpp"
#include "pseudosynth/search.hpp"

namespace fs = std::filesystem;
using namespace pseudosynth;


namespace {

enum class Status { Pass, Fail, Skip };

struct Check {
  Status status = Status::Pass;
  std::string detail;
};

Check pass(std::string d) { return {Status::Pass, std::move(d)}; }
Check fail(std::string d) { return {Status::Fail, std::move(d)}; }
Check skip(std::string d) { return {Status::Skip, std::move(d)}; }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<oracle::Ranks> as_ranks(const std::vector<Selection>& sels) {
  std::vector<oracle::Ranks> out;
  for (const auto& s : sels) out.push_back(s.ranks());
  return out;
}

SearchResult run_mock(const MockScenario& sc, Localizer* loc, std::size_t budget,
                      Judge* judge_override = nullptr) {
  MockJudge judge(sc.instance, sc.spec);
  SearchConfig cfg;
  cfg.budget = budget;
  return best_first_search(sc.instance, judge_override ? *judge_override : judge, loc, cfg);
}

std::size_t budget_for(std::uint64_t seed, std::size_t hi) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  return std::uniform_int_distribution<std::size_t>(1, hi)(rng);
}

// ---------------------------------------------------------------------------

struct GridRun {
  MockScenario scenario;
  SearchResult result;
  std::size_t budget;
};

std::vector<GridRun>& grid_runs() {
  static std::vector<GridRun> runs;
  return runs;
}

Check criterion1() {
  RandomGridOptions opt;
  opt.max_lines = 4;
  opt.max_rank = 5;
  opt.p_context = 0.3;
  opt.p_compile_bad = 0.5;
  opt.p_semantic_bad = 0.4;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t mismatches = 0, judged_total = 0, accepted = 0;
  std::string first_bad;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    MockScenario sc = random_grid_scenario(seed, opt);
    const std::size_t budget = budget_for(seed, 40);
    SearchResult r = run_mock(sc, nullptr, budget);
    const auto got = as_ranks(r.trace.judged());
    const auto want = oracle::expected_judged(sc, budget);
    judged_total += got.size();
    if (r.status == SearchStatus::Accepted) ++accepted;
    if (got != want) {
      ++mismatches;
      if (first_bad.empty()) first_bad = " first mismatch seed " + std::to_string(seed);
    }
    grid_runs().push_back({std::move(sc), std::move(r), budget});
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string d = fmt("200 grids, %zu judged selections, %zu accepted, %zu mismatches, %.2f s",
                            judged_total, accepted, mismatches, secs) + first_bad;
  return mismatches == 0 && secs < 10.0 ? pass(d) : fail(d);
}

Check criterion2() {
  std::size_t violations = 0, pops = 0;
  for (const GridRun& g : grid_runs()) {
    const auto p = g.result.trace.popped_priorities();
    pops += p.size();
    for (std::size_t i = 1; i < p.size(); ++i)
      if (p[i] > p[i - 1]) ++violations;
  }
  const std::string d = fmt("%zu runs, %zu pops, %zu increases", grid_runs().size(), pops, violations);
  return violations == 0 && !grid_runs().empty() ? pass(d) : fail(d);
}

std::unique_ptr<Localizer> localizer_for(std::size_t k) {
  LocalizerOptions o;
  o.kind = static_cast<LocalizerKind>(k % 4);
  return make_localizer(o);
}

Check criterion3() {
  RandomGridOptions opt;
  opt.max_lines = 6;
  opt.max_rank = 5;
  opt.p_context = 0.3;
  opt.p_compile_bad = 0.5;
  std::size_t bad = 0, prefix_runs = 0, probes = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    MockScenario sc = random_grid_scenario(1000 + seed, opt);
    const std::size_t budget = budget_for(seed, 60);
    MockJudge inner(sc.instance, sc.spec);
    CountingJudge judge(inner);
    auto loc = localizer_for(seed);
    if (dynamic_cast<PrefixPruningLocalizer*>(loc.get())) ++prefix_runs;
    SearchConfig cfg;
    cfg.budget = budget;
    SearchResult r = best_first_search(sc.instance, judge, loc.get(), cfg);
    for (const auto& rec : r.trace.records)
      if (rec.kind == TrialKind::Probe) ++probes;
    if (judge.compile_calls() != r.trials_used || r.trials_used > budget) ++bad;
  }
  const std::string d = fmt("100 runs (%zu with prefix pruning, %zu probes), %zu accounting violations",
                            prefix_runs, probes, bad);
  return bad == 0 && probes > 0 ? pass(d) : fail(d);
}

/// Always down-weights some line of the failing selection.
class ForcedDownWeight : public Localizer {
public:
  explicit ForcedDownWeight(std::uint64_t seed) : rng_(seed) {}
  LocalizationResult localize(const LocalizationRequest& req, Judge&) override {
    const std::size_t L = req.selection.size();
    LocalizationResult r;
    r.verdict = DownWeight{std::uniform_int_distribution<std::size_t>(1, L)(rng_)};
    return r;
  }
  std::string name() const override { return "forced"; }

private:
  std::mt19937_64 rng_;
};

Check criterion4() {
  RandomGridOptions opt;
  opt.max_lines = 5;
  opt.max_rank = 5;
  opt.p_compile_bad = 0.6;
  opt.p_context = 0.2;
  std::size_t dupes = 0, rebuild_runs = 0, judged = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    MockScenario sc = random_grid_scenario(5000 + seed, opt);
    ForcedDownWeight loc(seed);
    SearchResult r = run_mock(sc, &loc, 200);
    const auto sels = r.trace.judged();
    judged += sels.size();
    std::set<std::vector<std::size_t>> seen;
    for (const auto& s : sels)
      if (!seen.insert(s.ranks()).second) ++dupes;
    if (std::any_of(r.trace.records.begin(), r.trace.records.end(),
                    [](const TrialRecord& t) { return t.verdict.starts_with("down_weight"); }))
      ++rebuild_runs;
  }
  const std::string d = fmt("100 runs, %zu with down-weight rebuilds, %zu judged, %zu re-judged",
                            rebuild_runs, judged, dupes);
  return dupes == 0 && rebuild_runs > 0 ? pass(d) : fail(d);
}

Check criterion5() {
  RandomGridOptions opt;
  opt.max_lines = 5;
  opt.max_rank = 4;
  opt.p_context = 0.0;
  opt.p_compile_bad = 0.5;
  std::size_t gold_pruned = 0, unsound = 0, not_accepted = 0, order_broken = 0, blacklists = 0,
              slower = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    MockScenario sc = random_grid_scenario(9000 + seed, opt);
    const auto order = oracle::enumerate_by_probability(sc.instance.candidate_lists);
    const auto pos = oracle::first_accept_position(sc);
    PrefixPruningLocalizer loc;
    SearchResult r = run_mock(sc, &loc, 4 * order.size() + 4);
    for (const auto& rec : r.trace.records) {
      if (!rec.verdict.starts_with("blacklist_prefix:")) continue;
      ++blacklists;
      const std::size_t k = std::stoul(rec.verdict.substr(17));
      const oracle::Ranks prefix(rec.selection.ranks().begin(), rec.selection.ranks().begin() + k);
      if (oracle::is_prefix_of(prefix, sc.gold.ranks())) ++gold_pruned;
      oracle::Ranks padded = prefix;
      padded.resize(sc.instance.num_lines(), 1);
      if (oracle::mock_compiles(sc.spec, padded, k)) ++unsound;
    }
    const auto judged = as_ranks(r.trace.judged());
    if (!oracle::is_subsequence(judged, order)) ++order_broken;
    if (r.status != SearchStatus::Accepted) ++not_accepted;
    else if (pos && judged.size() > *pos) ++slower;
  }
  const std::string d =
      fmt("100 specs, %zu blacklisted prefixes; gold pruned %zu, unsound %zu, not accepted %zu, "
          "full trials beyond gold position %zu, order violations %zu",
          blacklists, gold_pruned, unsound, not_accepted, slower, order_broken);
  return gold_pruned + unsound + not_accepted + order_broken + slower == 0 && blacklists > 0
             ? pass(d)
             : fail(d);
}

Check criterion6() {
  const std::size_t L = 6, M = 5;
  std::vector<std::vector<MockCandidateSpec>> lines(L);
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t r = 0; r < M; ++r) {
      MockCandidateSpec c;
      c.log_prob = -0.1 * static_cast<double>(r);
      if (i == 0 && r + 1 < M) c.label.kind = MockLabelKind::CompileBad;
      lines[i].push_back(c);
    }
  MockScenario sc = make_mock_scenario("offsets", "calibration", lines,
                                       std::vector<std::size_t>(L, M), 100, 20260517);
  MockJudge judge(sc.instance, sc.spec);
  std::size_t draws = 0, mismatch = 0;
  std::vector<std::size_t> ranks(L, 1);
  while (draws < 10000) {
    if (ranks[0] < M) {
      Selection sel(ranks);
      Program p{assemble(sc.instance, sel), sel, L};
      auto res = judge.compile(p);
      const auto& f = std::get<CompileFailure>(res);
      const auto outcome = to_outcome(f, p.source);
      ++draws;
      if (outcome.reported_logical_line != std::optional<std::size_t>(1)) ++mismatch;
    }
    for (std::size_t i = L; i-- > 0;) {
      if (++ranks[i] <= M) break;
      ranks[i] = 1;
    }
  }
  const double rate = static_cast<double>(mismatch) / static_cast<double>(draws);
  const std::string d = fmt("%zu distinct selections, mismatch rate %.4f (target 0.217 +/- 0.01)",
                            draws, rate);
  return std::abs(rate - 0.217) <= 0.01 ? pass(d) : fail(d);
}

Check criterion7() {
  const auto bench = mock_benchmark(7, 50, 0.5);
  RunnerConfig none_cfg, prefix_cfg;
  prefix_cfg.localizer.kind = LocalizerKind::Prefix;
  const auto jobs = mock_jobs(bench);
  const RunSummary base = digests(run_problems(jobs, none_cfg));
  const RunSummary pref = digests(run_problems(jobs, prefix_cfg));
  const TrialDeltaReport rep = trial_delta_report(base, pref);

  std::size_t worsens_easy = 0, worsens_hard = 0, improves_easy = 0, improves_hard = 0;
  std::vector<double> hard_rel;
  for (const auto& pd : rep.problems) {
    const bool hard = pd.tag == "hard";
    if (pd.category == DeltaCategory::Worsens) ++(hard ? worsens_hard : worsens_easy);
    if (pd.category == DeltaCategory::Improves) ++(hard ? improves_hard : improves_easy);
    if (hard && pd.baseline_trials && pd.method_trials)
      hard_rel.push_back(static_cast<double>(*pd.method_trials) /
                         static_cast<double>(*pd.baseline_trials));
  }
  std::sort(hard_rel.begin(), hard_rel.end());
  double median = NAN;
  if (!hard_rel.empty()) {
    const std::size_t n = hard_rel.size();
    median = n % 2 ? hard_rel[n / 2] : 0.5 * (hard_rel[n / 2 - 1] + hard_rel[n / 2]);
  }
  const std::size_t fts = rep.categories.at(DeltaCategory::FailToSuccess).count;
  const std::string d =
      fmt("worsens %zu (easy %zu / hard %zu), improves %zu (easy %zu / hard %zu), "
          "fail->success %zu, hard median relative trials x%.2f over %zu problems",
          worsens_easy + worsens_hard, worsens_easy, worsens_hard, improves_easy + improves_hard,
          improves_easy, improves_hard, fts, median, hard_rel.size());
  const bool ok = worsens_easy + worsens_hard > 0 && worsens_easy > worsens_hard &&
                  improves_easy + improves_hard > 0 && improves_hard > improves_easy &&
                  !hard_rel.empty() && median <= 0.8;
  return ok ? pass(d) : fail(d);
}

Check criterion8() {
  const MockScenario p1 = load_mock_scenario(fs::path(PSEUDOSYNTH_FIXTURES_DIR) / "mock/stacked_offenders.json");
  const MockScenario p2 = load_mock_scenario(fs::path(PSEUDOSYNTH_FIXTURES_DIR) / "mock/shifted_report.json");

  SearchResult none1 = run_mock(p1, nullptr, p1.instance.budget);
  PrefixPruningLocalizer pref;
  SearchResult pref1 = run_mock(p1, &pref, p1.instance.budget);
  const bool ok1 = pref1.status == SearchStatus::Accepted &&
                   (none1.status != SearchStatus::Accepted || pref1.trials_used < none1.trials_used);

  SearchResult none2 = run_mock(p2, nullptr, p2.instance.budget);
  auto backend = std::make_shared<ProcessClassifierBackend>(
      std::vector<std::string>{PSEUDOSYNTH_STUB_CLASSIFIER, "reported", "0.99"});
  ClassifierLocalizer cls(backend, 0.95);
  SearchResult cls2 = run_mock(p2, &cls, p2.instance.budget);
  const bool first_blames_3 =
      !cls2.trace.records.empty() && cls2.trace.records.front().verdict == "down_weight:3";
  const bool ok2 = none2.status == SearchStatus::Accepted && cls2.status != SearchStatus::Accepted &&
                   first_blames_3 && cls.healthy();

  auto trials = [](const SearchResult& r) {
    return r.status == SearchStatus::Accepted ? std::to_string(r.trials_used) : std::string("fail");
  };
  const std::string d = fmt("program1: none %s vs prefix %s trials; program2 (B=%zu): none %s, "
                            "classifier %s (first verdict %s)",
                            trials(none1).c_str(), trials(pref1).c_str(), p2.instance.budget,
                            trials(none2).c_str(), trials(cls2).c_str(),
                            cls2.trace.records.empty() ? "-" : cls2.trace.records.front().verdict.c_str());
  return ok1 && ok2 ? pass(d) : fail(d);
}

std::optional<LoadedProblem> load_fixture(const std::string& dir, const std::string& candidates) {
  const fs::path root = fs::path(PSEUDOSYNTH_FIXTURES_DIR) / dir;
  ProblemFiles files{root / "pseudocode.tsv", root / candidates, root / "tests"};
  auto problems = load_problem_set(files, LoadOptions{});
  if (problems.size() != 1) return std::nullopt;
  return problems.front();
}

Check criterion9() {
  RealJudgeConfig jc = RealJudgeConfig::from_environment();
  if (!compiler_available(jc)) return skip("no compiler '" + jc.compiler + "' found");
  auto top = load_fixture("selsort", "candidates.jsonl");
  auto rank2 = load_fixture("selsort", "candidates_rank2.jsonl");
  if (!top || !rank2) return fail("fixture did not load");

  RealJudge judge(jc);
  SearchConfig cfg;
  cfg.budget = 100;
  SearchResult a = best_first_search(top->instance.without_hidden_tests(), judge, nullptr, cfg);
  SearchResult b = best_first_search(rank2->instance.without_hidden_tests(), judge, nullptr, cfg);
  const bool public_test_ok = top->instance.public_tests().size() == 1 &&
                              top->instance.public_tests()[0].input == "5 3 2 4 1 5\n";
  const bool ok = public_test_ok && top->instance.num_lines() == 13 &&
                  a.status == SearchStatus::Accepted && a.trials_used == 1 &&
                  b.status == SearchStatus::Accepted && b.trials_used <= 3;
  const std::string d = fmt("L=%zu, gold at rank 1: %s in %zu trial(s); gold at rank 2 on line 5: "
                            "%s in %zu trial(s)",
                            top->instance.num_lines(), to_string(a.status).c_str(), a.trials_used,
                            to_string(b.status).c_str(), b.trials_used);
  return ok ? pass(d) : fail(d);
}

Check criterion10() {
  RealJudgeConfig jc = RealJudgeConfig::from_environment();
  if (!compiler_available(jc)) return skip("no compiler '" + jc.compiler + "' found");
  jc.compile_cache = true;
  auto p = load_fixture("boolcheck", "candidates.jsonl");
  if (!p) return fail("fixture did not load");
  RealJudge judge(jc);
  LineAccuracy acc = line_level_accuracy(p->instance, p->gold_code, judge);
  const auto& row = acc.correct.at(3);
  const bool ok = row.size() == 4 && row[0] && row[1] && !row[2] && !row[3];
  std::string cells;
  for (bool c : row) cells += c ? '1' : '0';
  const std::string d = fmt("line 4 candidates [if (b), if (b == true), if (!b), broken] -> %s "
                            "(expected 1100), top-1 accuracy %.2f",
                            cells.c_str(), acc.accuracy_at.at(1));
  return ok ? pass(d) : fail(d);
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
      {"enumeration-oracle equivalence", criterion1},
      {"popped-priority monotonicity", criterion2},
      {"budget exactness", criterion3},
      {"no re-judging across rebuilds", criterion4},
      {"prefix-pruning soundness", criterion5},
      {"offset-noise calibration", criterion6},
      {"trial-delta direction on mock benchmark", criterion7},
      {"localization regression fixtures", criterion8},
      {"real-compiler end-to-end", criterion9},
      {"line-level functional equivalence", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const char* tag = v.status == Status::Pass ? "PASS" : v.status == Status::Fail ? "FAIL" : "SKIP";
    if (v.status == Status::Fail) ++failures;
    std::printf("[%s] criterion %zu: %s: %s\n", tag, i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
