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

#include "pseudosynth/trace_io.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "json.hpp"

namespace pseudosynth {

using json = nlohmann::json;

RunDigest make_digest(const RunHeader& header, const SearchResult& result) {
  RunDigest d;
  d.problem = header.problem;
  d.method = header.method;
  d.budget = header.budget;
  d.tag = header.tag;
  d.accepted = result.status == SearchStatus::Accepted;
  d.trials_used = result.trials_used;
  d.accepting_trial = result.accepting_trial;
  return d;
}

void write_trace(std::ostream& out, const RunHeader& header, const SearchResult& result) {
  json run = {{"type", "run"},          {"format", kTraceFormat},   {"version", kTraceVersion},
              {"problem", header.problem}, {"method", header.method}, {"tag", header.tag},
              {"budget", header.budget},  {"alpha", header.alpha},  {"seed", header.seed}};
  out << run.dump() << '\n';
  for (const TrialRecord& r : result.trace.records) {
    json t = {{"type", "trial"},
              {"trial", r.trial},
              {"kind", r.kind == TrialKind::Full ? "full" : "probe"},
              {"selection", r.selection.ranks()},
              {"prefix_len", r.prefix_len},
              {"outcome", r.outcome},
              {"budget_remaining", r.budget_remaining}};
    if (std::isfinite(r.priority)) t["priority"] = r.priority;
    else t["priority"] = nullptr;
    t["reported_line"] = r.reported_line ? json(*r.reported_line) : json(nullptr);
    if (!r.message.empty()) t["message"] = r.message;
    if (!r.verdict.empty()) t["verdict"] = r.verdict;
    out << t.dump() << '\n';
  }
  json res = {{"type", "result"},
              {"status", to_string(result.status)},
              {"accepted", result.status == SearchStatus::Accepted},
              {"trials_used", result.trials_used},
              {"blacklist_size", result.blacklist_size}};
  res["accepting_trial"] = result.accepting_trial ? json(*result.accepting_trial) : json(nullptr);
  if (result.program_selection) res["program_selection"] = result.program_selection->ranks();
  if (!result.error.empty()) res["error"] = result.error;
  out << res.dump() << '\n';
}

std::vector<TraceRun> read_traces(std::istream& in) {
  std::vector<TraceRun> runs;
  std::optional<TraceRun> cur;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw EvalError("trace line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(e.what());
    }
    try {
      const std::string type = j.at("type").get<std::string>();
      if (type == "run") {
        if (cur) fail("run started before previous run ended");
        if (j.value("format", std::string{}) != kTraceFormat || j.value("version", 0) != kTraceVersion)
          fail("unsupported trace format");
        cur.emplace();
        RunHeader& h = cur->header;
        h.problem = j.at("problem").get<std::string>();
        h.method = j.at("method").get<std::string>();
        h.tag = j.value("tag", std::string{});
        h.budget = j.at("budget").get<std::size_t>();
        h.alpha = j.value("alpha", 0.1);
        h.seed = j.value("seed", std::uint64_t{0});
      } else if (type == "trial") {
        if (!cur) fail("trial outside a run");
        TrialRecord r;
        r.trial = j.at("trial").get<std::size_t>();
        r.kind = j.at("kind").get<std::string>() == "probe" ? TrialKind::Probe : TrialKind::Full;
        r.selection = Selection(j.at("selection").get<std::vector<std::size_t>>());
        r.prefix_len = j.at("prefix_len").get<std::size_t>();
        r.priority = j.at("priority").is_null() ? -std::numeric_limits<double>::infinity()
                                                : j.at("priority").get<double>();
        r.outcome = j.at("outcome").get<std::string>();
        if (!j.at("reported_line").is_null())
          r.reported_line = j.at("reported_line").get<std::size_t>();
        r.message = j.value("message", std::string{});
        r.verdict = j.value("verdict", std::string{});
        r.budget_remaining = j.at("budget_remaining").get<std::size_t>();
        cur->records.push_back(std::move(r));
      } else if (type == "result") {
        if (!cur) fail("result outside a run");
        RunDigest& d = cur->digest;
        d.problem = cur->header.problem;
        d.method = cur->header.method;
        d.budget = cur->header.budget;
        d.tag = cur->header.tag;
        d.accepted = j.at("accepted").get<bool>();
        d.trials_used = j.at("trials_used").get<std::size_t>();
        if (!j.at("accepting_trial").is_null())
          d.accepting_trial = j.at("accepting_trial").get<std::size_t>();
        cur->status = j.at("status").get<std::string>();
        runs.push_back(std::move(*cur));
        cur.reset();
      } else {
        fail("unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      fail(e.what());
    }
  }
  if (cur) throw EvalError("trace ends inside run for '" + cur->header.problem + "'");
  return runs;
}

RunSummary read_trace_digests(std::istream& in) {
  RunSummary out;
  for (TraceRun& r : read_traces(in)) out.push_back(std::move(r.digest));
  return out;
}

}  // namespace pseudosynth
