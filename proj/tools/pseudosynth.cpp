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

// Command-line front end: synth, eval, gen-localizer-data, report, simulate.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pseudosynth/dataset.hpp"
#include "pseudosynth/eval.hpp"
#include "pseudosynth/localization.hpp"
#include "pseudosynth/mock_bench.hpp"
#include "pseudosynth/mock_judge.hpp"
#include "pseudosynth/real_judge.hpp"
#include "pseudosynth/runner.hpp"
#include "pseudosynth/trace_io.hpp"

namespace fs = std::filesystem;
using namespace pseudosynth;

namespace {

struct DataArgs {
  std::string pseudocode;
  std::string candidates;
  std::string tests_dir;
  std::string problem;  // optional id filter
  std::size_t beam = 100;
  bool gold_backfill = false;
  double backfill_log_prob = -20.0;
  bool dedup = false;
};

struct CompilerArgs {
  std::string compiler;
  std::string flags;
  int compile_timeout_ms = 30000;
  int test_timeout_ms = 2000;
};

void add_data_options(CLI::App* cmd, DataArgs& a, bool candidates_required) {
  cmd->add_option("--pseudocode", a.pseudocode, "Pseudocode TSV")->required()->check(CLI::ExistingFile);
  auto* c = cmd->add_option("--candidates", a.candidates, "Candidate JSONL");
  if (candidates_required) c->required();
  c->check(CLI::ExistingFile);
  cmd->add_option("--tests-dir", a.tests_dir, "Directory of <probid>/<probid>_testcases_*.txt")
      ->required()
      ->check(CLI::ExistingDirectory);
  cmd->add_option("--problem", a.problem, "Only this problem id (<probid>-<subid>)");
  cmd->add_option("--beam", a.beam, "Candidates kept per line")->check(CLI::PositiveNumber);
  cmd->add_flag("--gold-backfill", a.gold_backfill, "Insert the gold line when a line has no candidates");
  cmd->add_option("--backfill-log-prob", a.backfill_log_prob, "Log-prob of backfilled gold lines");
  cmd->add_flag("--dedup", a.dedup, "Drop candidates repeating a higher-ranked candidate's code");
}

void add_compiler_options(CLI::App* cmd, CompilerArgs& a) {
  cmd->add_option("--cxx", a.compiler, "Compiler executable (default $PSEUDOSYNTH_CXX or g++)");
  cmd->add_option("--cxxflags", a.flags, "Space-separated compiler flags");
  cmd->add_option("--compile-timeout-ms", a.compile_timeout_ms)->check(CLI::PositiveNumber);
  cmd->add_option("--test-timeout-ms", a.test_timeout_ms)->check(CLI::PositiveNumber);
}

RealJudgeConfig judge_config(const CompilerArgs& a, bool cache) {
  RealJudgeConfig c = RealJudgeConfig::from_environment();
  if (!a.compiler.empty()) c.compiler = a.compiler;
  if (!a.flags.empty()) {
    std::istringstream in(a.flags);
    c.flags.clear();
    for (std::string f; in >> f;) c.flags.push_back(f);
  }
  c.compile_timeout = std::chrono::milliseconds(a.compile_timeout_ms);
  c.test_timeout = std::chrono::milliseconds(a.test_timeout_ms);
  c.compile_cache = cache;
  return c;
}

std::vector<LoadedProblem> load(const DataArgs& a, std::size_t budget) {
  ProblemFiles files{a.pseudocode, a.candidates, a.tests_dir};
  LoadOptions opt;
  opt.beam = a.beam;
  opt.budget = budget;
  opt.gold_backfill = a.gold_backfill;
  opt.backfill_log_prob = a.backfill_log_prob;
  opt.dedup_code = a.dedup;
  LoadReport report;
  auto problems = load_problem_set(files, opt, &report);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& r : report.rejected) std::cerr << "rejected: " << r << '\n';
  if (!a.problem.empty()) {
    std::erase_if(problems, [&](const LoadedProblem& p) { return p.instance.id != a.problem; });
    if (problems.empty()) throw std::runtime_error("problem '" + a.problem + "' not found");
  }
  return problems;
}

std::vector<std::string> split_command(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

void print_run_line(const RunOutcome& o) {
  std::cout << o.header.problem << '\t' << o.header.method << '\t' << to_string(o.result.status)
            << "\ttrials=" << o.result.trials_used;
  if (o.result.accepting_trial) std::cout << "\taccepted_at=" << *o.result.accepting_trial;
  if (o.hidden_passed) std::cout << "\thidden=" << (*o.hidden_passed ? "pass" : "fail");
  if (!o.result.error.empty()) std::cout << "\terror=" << o.result.error;
  std::cout << '\n';
}

std::ofstream open_out(const std::string& path) {
  if (const fs::path parent = fs::path(path).parent_path(); !parent.empty())
    fs::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  DataArgs data;
  CompilerArgs compiler;
  std::size_t budget = 100;
  std::string localizer = "none";
  double alpha = 0.1;
  double beta = 0.95;
  std::uint64_t seed = 0;
  std::string classifier_cmd;
  std::string trace;
  std::string programs_dir;
  int jobs = 1;
};

int cmd_synth(const SynthArgs& a) {
  auto problems = load(a.data, a.budget);
  RealJudgeConfig jc = judge_config(a.compiler, false);
  if (!compiler_available(jc)) throw std::runtime_error("compiler '" + jc.compiler + "' not found");

  RunnerConfig rc;
  rc.search.alpha = a.alpha;
  rc.search.beam = a.data.beam;
  rc.budget = a.budget;
  rc.seed = a.seed;
  rc.localizer.kind = *parse_localizer_kind(a.localizer);
  rc.localizer.beta = a.beta;
  rc.localizer.classifier_command = split_command(a.classifier_cmd);

  std::vector<RunJob> jobs;
  for (const auto& p : problems)
    jobs.push_back({&p.instance, "", [jc] { return std::make_unique<RealJudge>(jc); }});
  auto outcomes = run_problems(jobs, rc, a.jobs);

  std::ofstream trace;
  if (!a.trace.empty()) trace = open_out(a.trace);
  if (!a.programs_dir.empty()) fs::create_directories(a.programs_dir);
  std::size_t accepted = 0;
  for (const auto& o : outcomes) {
    print_run_line(o);
    if (o.result.status == SearchStatus::Accepted) ++accepted;
    if (trace) write_trace(trace, o.header, o.result);
    if (!a.programs_dir.empty() && o.result.program) {
      std::ofstream(fs::path(a.programs_dir) / (o.header.problem + ".cpp")) << o.result.program->text;
    }
  }
  std::cout << "accepted " << accepted << '/' << outcomes.size() << " at budget " << a.budget
            << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  DataArgs data;
  CompilerArgs compiler;
  std::vector<std::size_t> cutoffs = kDefaultRankCutoffs;
  std::string matrix_out;
};

int cmd_eval(const EvalArgs& a) {
  auto problems = load(a.data, 100);
  RealJudgeConfig jc = judge_config(a.compiler, true);
  if (!compiler_available(jc)) throw std::runtime_error("compiler '" + jc.compiler + "' not found");
  RealJudge judge(jc);

  std::vector<ProgramOracleStats> stats;
  std::map<std::size_t, double> acc_sum;
  std::size_t scored_programs = 0;
  std::ofstream matrix;
  if (!a.matrix_out.empty()) {
    matrix = open_out(a.matrix_out);
    matrix << "problem\tline\trank\tcorrect\n";
  }
  for (const auto& p : problems) {
    LineAccuracy acc;
    try {
      acc = line_level_accuracy(p.instance, p.gold_code, judge, a.cutoffs);
    } catch (const EvalError& e) {
      std::cerr << "skipped: " << e.what() << '\n';
      continue;
    }
    ++scored_programs;
    for (auto& [k, v] : acc.accuracy_at) acc_sum[k] += v;
    stats.push_back(oracle_stats(acc));
    if (matrix) {
      for (std::size_t i = 0; i < acc.correct.size(); ++i)
        for (std::size_t r = 0; r < acc.correct[i].size(); ++r)
          matrix << p.instance.id << '\t' << i + 1 << '\t' << r + 1 << '\t'
                 << (acc.correct[i][r] ? 1 : 0) << '\n';
    }
  }
  for (auto& [k, v] : acc_sum) v /= static_cast<double>(std::max<std::size_t>(scored_programs, 1));
  std::cout << format_oracle_summary(summarize_oracle(stats), acc_sum);
  return 0;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  DataArgs data;
  CompilerArgs compiler;
  std::vector<std::string> mock;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  std::vector<LocalizerTrainingRecord> records;
  TrainingDataStats stats;
  if (!a.mock.empty()) {
    for (const auto& path : a.mock) {
      MockScenario sc = load_mock_scenario(path);
      GoldProgram g{&sc.instance, selected_code(sc.gold, sc.instance.candidate_lists), sc.gold};
      MockJudge judge(sc.instance, sc.spec);
      auto r = generate_localizer_training_data({g}, judge, kDefaultPreamble, &stats);
      records.insert(records.end(), r.begin(), r.end());
    }
  } else {
    if (a.data.pseudocode.empty()) throw std::runtime_error("--pseudocode or --mock required");
    auto problems = load(a.data, 100);
    RealJudge judge(judge_config(a.compiler, false));
    std::vector<GoldProgram> golds;
    for (const auto& p : problems) golds.push_back({&p.instance, p.gold_code, std::nullopt});
    records = generate_localizer_training_data(golds, judge, kDefaultPreamble, &stats);
  }
  for (const auto& w : stats.warnings) std::cerr << "warning: " << w << '\n';
  std::ofstream file;
  if (!a.out.empty()) file = open_out(a.out);
  std::ostream& out = a.out.empty() ? std::cout : file;
  for (const auto& r : records) out << to_json_line(r) << '\n';
  std::cerr << records.size() << " records, " << stats.compiles << " compiles, "
            << stats.skipped_programs << " programs skipped\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> traces;
  std::string baseline = "none";
  std::vector<std::size_t> budgets = {1, 5, 10, 25, 50, 100};
  std::string curve_out;
};

int cmd_report(const ReportArgs& a) {
  std::map<std::string, RunSummary> by_method;
  for (const auto& path : a.traces) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    for (auto& d : read_trace_digests(in)) by_method[d.method].push_back(std::move(d));
  }
  if (by_method.empty()) throw std::runtime_error("no runs found");
  std::size_t min_budget = SIZE_MAX;
  for (auto& [_, s] : by_method)
    for (auto& d : s) min_budget = std::min(min_budget, d.budget);
  std::vector<std::size_t> budgets;
  for (std::size_t b : a.budgets)
    if (b <= min_budget) budgets.push_back(b);

  std::cout << format_success_table(by_method, budgets);
  if (!a.curve_out.empty()) open_out(a.curve_out) << format_success_curve_tsv(by_method, budgets);

  auto base = by_method.find(a.baseline);
  if (base == by_method.end()) {
    std::cerr << "baseline method '" << a.baseline << "' not in traces; no delta tables\n";
    return 0;
  }
  for (auto& [name, summary] : by_method) {
    if (name == a.baseline) continue;
    std::cout << '\n' << format_delta_table(trial_delta_report(base->second, summary), name);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct SimArgs {
  std::vector<std::string> scenarios;
  std::size_t benchmark = 0;
  bool regression = false;
  double hard_share = 0.5;
  std::uint64_t seed = 0;
  std::vector<std::string> localizers = {"none"};
  std::size_t budget = 0;
  double alpha = 0.1;
  double beta = 0.95;
  std::string classifier_cmd;
  std::string trace;
  std::string export_dir;
  int jobs = 0;
};

int cmd_simulate(const SimArgs& a) {
  std::vector<MockScenario> scenarios;
  for (const auto& path : a.scenarios) scenarios.push_back(load_mock_scenario(path));
  if (a.benchmark > 0) {
    auto gen = mock_benchmark(a.seed, a.benchmark, a.hard_share);
    scenarios.insert(scenarios.end(), gen.begin(), gen.end());
  }
  if (a.regression) {
    scenarios.push_back(stacked_offenders_program());
    scenarios.push_back(shifted_report_program());
  }
  if (scenarios.empty()) throw std::runtime_error("no scenarios (use --scenario, --benchmark or --regression)");
  if (!a.export_dir.empty()) {
    fs::create_directories(a.export_dir);
    for (const auto& sc : scenarios)
      save_mock_scenario(sc, fs::path(a.export_dir) / (sc.instance.id + ".json"));
  }

  std::ofstream trace;
  if (!a.trace.empty()) trace = open_out(a.trace);
  std::map<std::string, RunSummary> by_method;
  for (const auto& name : a.localizers) {
    RunnerConfig rc;
    rc.search.alpha = a.alpha;
    if (a.budget > 0) rc.budget = a.budget;
    rc.seed = a.seed;
    rc.localizer.kind = *parse_localizer_kind(name);
    rc.localizer.beta = a.beta;
    rc.localizer.classifier_command = split_command(a.classifier_cmd);
    auto outcomes = run_problems(mock_jobs(scenarios), rc, a.jobs);
    for (const auto& o : outcomes) {
      if (trace) write_trace(trace, o.header, o.result);
      if (!o.error.empty()) std::cerr << o.header.problem << ": " << o.error << '\n';
    }
    by_method[name] = digests(outcomes);
  }

  std::size_t min_budget = SIZE_MAX;
  for (auto& [_, s] : by_method)
    for (auto& d : s) min_budget = std::min(min_budget, d.budget);
  std::vector<std::size_t> budgets;
  for (std::size_t b : {1, 5, 10, 25, 50, 100})
    if (b <= min_budget) budgets.push_back(b);
  std::cout << format_success_table(by_method, budgets);
  if (by_method.contains("none")) {
    for (auto& [name, summary] : by_method) {
      if (name == "none") continue;
      std::cout << '\n' << format_delta_table(trial_delta_report(by_method["none"], summary), name);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search-based pseudocode-to-code synthesis"};
  app.require_subcommand(1);
  const std::vector<std::string> localizer_names = {"none", "reported", "prefix", "classifier"};

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Search for an accepted program per problem");
  add_data_options(s, synth.data, true);
  add_compiler_options(s, synth.compiler);
  s->add_option("--budget,-B", synth.budget, "Trials (compiles) per problem")->check(CLI::PositiveNumber);
  s->add_option("--localizer", synth.localizer)->check(CLI::IsMember(localizer_names));
  s->add_option("--alpha", synth.alpha, "Down-weighting factor")->check(CLI::Range(1e-9, 1.0));
  s->add_option("--beta", synth.beta, "Classifier confidence threshold")->check(CLI::Range(0.0, 1.0));
  s->add_option("--seed", synth.seed, "Recorded in traces");
  s->add_option("--classifier-cmd", synth.classifier_cmd, "Classifier process command line");
  s->add_option("--trace", synth.trace, "Write trial traces (JSONL)");
  s->add_option("--programs-dir", synth.programs_dir, "Write final programs here");
  s->add_option("--jobs,-j", synth.jobs, "Problems run in parallel (0 = all cores)");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Line-level accuracy and oracle statistics");
  add_data_options(e, ev.data, true);
  add_compiler_options(e, ev.compiler);
  e->add_option("--cutoffs", ev.cutoffs, "Rank cutoffs")->delimiter(',');
  e->add_option("--matrix-out", ev.matrix_out, "Write the per-candidate correctness matrix (TSV)");

  GenArgs gen;
  auto* g = app.add_subcommand("gen-localizer-data", "Emit compile-error localization training data");
  g->add_option("--pseudocode", gen.data.pseudocode)->check(CLI::ExistingFile);
  g->add_option("--candidates", gen.data.candidates)->check(CLI::ExistingFile);
  g->add_option("--tests-dir", gen.data.tests_dir)->check(CLI::ExistingDirectory);
  g->add_option("--beam", gen.data.beam)->check(CLI::PositiveNumber);
  g->add_option("--mock", gen.mock, "Mock scenario files instead of a dataset")->check(CLI::ExistingFile);
  add_compiler_options(g, gen.compiler);
  g->add_option("--out,-o", gen.out, "Output JSONL (default stdout)");

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "Success curves and trial-delta tables from traces");
  r->add_option("traces", rep.traces, "Trace files")->required()->check(CLI::ExistingFile);
  r->add_option("--baseline", rep.baseline, "Method compared against");
  r->add_option("--budgets", rep.budgets)->delimiter(',');
  r->add_option("--curve-out", rep.curve_out, "Write the success curve (TSV)");

  SimArgs sim;
  auto* m = app.add_subcommand("simulate", "Run searches against mock judges");
  m->add_option("--scenario", sim.scenarios, "Mock scenario files")->check(CLI::ExistingFile);
  m->add_option("--benchmark", sim.benchmark, "Generate this many easy/hard problems");
  m->add_flag("--regression", sim.regression, "Include the two built-in localization regression programs");
  m->add_option("--hard-share", sim.hard_share)->check(CLI::Range(0.0, 1.0));
  m->add_option("--seed", sim.seed, "Benchmark generator seed");
  m->add_option("--localizer", sim.localizers, "Methods to run")
      ->delimiter(',')
      ->check(CLI::IsMember(localizer_names));
  m->add_option("--budget,-B", sim.budget, "Override scenario budgets");
  m->add_option("--alpha", sim.alpha)->check(CLI::Range(1e-9, 1.0));
  m->add_option("--beta", sim.beta)->check(CLI::Range(0.0, 1.0));
  m->add_option("--classifier-cmd", sim.classifier_cmd);
  m->add_option("--trace", sim.trace, "Write trial traces (JSONL)");
  m->add_option("--export-dir", sim.export_dir, "Save the scenarios as JSON");
  m->add_option("--jobs,-j", sim.jobs);

  CLI11_PARSE(app, argc, argv);
  try {
    if (s->parsed()) return cmd_synth(synth);
    if (e->parsed()) return cmd_eval(ev);
    if (g->parsed()) return cmd_gen(gen);
    if (r->parsed()) return cmd_report(rep);
    if (m->parsed()) return cmd_simulate(sim);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
