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

#include "pseudosynth/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace pseudosynth {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(path.string() + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (auto& l : lines)
    if (!l.empty() && l.back() == '\r') l.pop_back();
  return lines;
}

long long parse_int(const std::string& s, const std::string& where, const char* field) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw DatasetError(where + ": field '" + field + "' is not an integer: '" + s + "'");
  return v;
}

struct TsvRow {
  std::string text, code, worker;
  long long line = 0;
  int indent = 0;
};

struct RawCandidate {
  std::size_t file_rank;
  std::string code;
  double log_prob;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw DatasetError(path.string() + ": cannot write");
}

fs::path test_path(const fs::path& dir, const std::string& probid, Visibility v) {
  return dir / probid /
         (probid + (v == Visibility::Public ? "_testcases_public.txt" : "_testcases_hidden.txt"));
}

}  // namespace

std::vector<TestCase> parse_testcases(const std::string& text, Visibility visibility) {
  std::vector<TestCase> tests;
  std::string block;
  TestCase current;
  bool reading_output = false;
  for (const auto& line : split_lines(text)) {
    if (line == kEndInput) {
      current.input = block;
      block.clear();
      reading_output = true;
    } else if (line == kEndOutput) {
      if (!reading_output) throw DatasetError("test file: output marker without input marker");
      current.expected_output = block;
      current.visibility = visibility;
      tests.push_back(std::move(current));
      current = {};
      block.clear();
      reading_output = false;
    } else {
      block += line;
      block += '\n';
    }
  }
  if (reading_output) throw DatasetError("test file: unterminated test case");
  return tests;
}

std::string format_testcases(const std::vector<TestCase>& tests) {
  std::string out;
  auto append_block = [&out](const std::string& s) {
    out += s;
    if (!s.empty() && s.back() != '\n') out += '\n';
  };
  for (const auto& t : tests) {
    append_block(t.input);
    out += kEndInput;
    out += '\n';
    append_block(t.expected_output);
    out += kEndOutput;
    out += '\n';
  }
  return out;
}

std::vector<LoadedProblem> load_problem_set(const ProblemFiles& files, const LoadOptions& options,
                                            LoadReport* report) {
  LoadReport local;
  LoadReport& rep = report ? *report : local;
  if (options.beam < 1) throw DatasetError("beam size must be >= 1");

  // Pseudocode table, grouped by program.
  const auto tsv_path = files.pseudocode_tsv.string();
  const auto tsv_lines = split_lines(read_file(files.pseudocode_tsv));
  if (tsv_lines.empty() || tsv_lines[0] != kPseudocodeHeader)
    throw DatasetError(tsv_path + ":1: expected header '" + std::string(kPseudocodeHeader) + "'");
  std::map<std::pair<std::string, std::string>, std::vector<TsvRow>> programs;
  for (std::size_t n = 1; n < tsv_lines.size(); ++n) {
    const auto where = tsv_path + ":" + std::to_string(n + 1);
    const auto fields = split(tsv_lines[n], '\t');
    if (fields.size() != 7)
      throw DatasetError(where + ": expected 7 tab-separated fields, got " +
                         std::to_string(fields.size()));
    TsvRow row;
    row.text = fields[0];
    row.code = fields[1];
    row.worker = fields[2];
    row.line = parse_int(fields[5], where, "line");
    row.indent = static_cast<int>(parse_int(fields[6], where, "indent"));
    if (fields[3].empty() || fields[4].empty())
      throw DatasetError(where + ": empty probid/subid");
    programs[{fields[3], fields[4]}].push_back(std::move(row));
  }

  // Candidate records.
  std::map<std::string, std::map<std::size_t, std::vector<RawCandidate>>> candidates;
  if (!files.candidates.empty()) {
    const auto cand_path = files.candidates.string();
    const auto lines = split_lines(read_file(files.candidates));
    if (lines.empty()) throw DatasetError(cand_path + ":1: missing format header");
    try {
      const auto header = json::parse(lines[0]);
      if (header.value("format", std::string{}) != kCandidatesFormat ||
          header.value("version", 0) != kCandidatesVersion)
        throw DatasetError(cand_path + ":1: unsupported candidate file header");
    } catch (const json::exception& e) {
      throw DatasetError(cand_path + ":1: " + e.what());
    }
    std::set<std::tuple<std::string, std::size_t, std::size_t>> seen;
    for (std::size_t n = 1; n < lines.size(); ++n) {
      if (lines[n].empty()) continue;
      const auto where = cand_path + ":" + std::to_string(n + 1);
      std::string problem;
      std::size_t line = 0, rank = 0;
      RawCandidate c{};
      try {
        const auto j = json::parse(lines[n]);
        problem = j.at("problem").get<std::string>();
        line = j.at("line").get<std::size_t>();
        rank = j.at("rank").get<std::size_t>();
        c.code = j.at("code").get<std::string>();
        c.log_prob = j.at("log_prob").get<double>();
      } catch (const json::exception& e) {
        throw DatasetError(where + ": " + e.what());
      }
      if (line < 1 || rank < 1) throw DatasetError(where + ": line and rank are 1-based");
      if (!std::isfinite(c.log_prob) || c.log_prob > 0.0)
        throw DatasetError(where + ": log_prob must be finite and <= 0");
      if (!seen.insert({problem, line, rank}).second)
        throw DatasetError(where + ": duplicate (problem, line, rank) = (" + problem + ", " +
                           std::to_string(line) + ", " + std::to_string(rank) + ")");
      c.file_rank = rank;
      candidates[problem][line].push_back(std::move(c));
    }
  }

  std::vector<LoadedProblem> out;
  std::map<std::string, std::vector<TestCase>> test_cache;
  for (auto& [key, rows] : programs) {
    const auto& [probid, subid] = key;
    LoadedProblem lp;
    lp.probid = probid;
    lp.subid = subid;
    lp.instance.id = probid + "-" + subid;
    lp.instance.budget = options.budget;
    const auto& id = lp.instance.id;
    std::stable_sort(rows.begin(), rows.end(),
                     [](const TsvRow& a, const TsvRow& b) { return a.line < b.line; });

    // Tests are shared by every program of a problem.
    auto tests_it = test_cache.find(probid);
    if (tests_it == test_cache.end()) {
      std::vector<TestCase> tests;
      for (auto vis : {Visibility::Public, Visibility::Hidden}) {
        const auto p = test_path(files.tests_dir, probid, vis);
        if (!fs::exists(p)) continue;
        try {
          auto parsed = parse_testcases(read_file(p), vis);
          tests.insert(tests.end(), parsed.begin(), parsed.end());
        } catch (const DatasetError& e) {
          throw DatasetError(p.string() + ": " + e.what());
        }
      }
      tests_it = test_cache.emplace(probid, std::move(tests)).first;
    }
    lp.instance.tests = tests_it->second;

    std::string reject_reason;
    const auto cand_it = candidates.find(id);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::size_t index = i + 1;
      lp.instance.lines.push_back({index, rows[i].text, rows[i].indent});
      lp.gold_code.push_back(rows[i].code);
      lp.worker_ids.push_back(rows[i].worker);

      CandidateList list;
      list.line_index = index;
      std::vector<RawCandidate> raw;
      if (cand_it != candidates.end()) {
        if (auto it = cand_it->second.find(index); it != cand_it->second.end()) raw = it->second;
      }
      if (rows[i].text.empty()) {
        if (!raw.empty())
          rep.warnings.push_back(id + " line " + std::to_string(index) +
                                 ": candidates for a fixed line ignored");
        list.candidates.push_back({rows[i].code, 0.0, 1});
      } else if (files.candidates.empty()) {
        list.candidates.push_back({rows[i].code, 0.0, 1});
      } else {
        std::sort(raw.begin(), raw.end(),
                  [](const RawCandidate& a, const RawCandidate& b) { return a.file_rank < b.file_rank; });
        for (const auto& rc : raw) list.candidates.push_back({rc.code, rc.log_prob, rc.file_rank});
        if (sort_and_rerank(list) && !raw.empty())
          rep.warnings.push_back(id + " line " + std::to_string(index) +
                                 ": candidate ranks not in log_prob order; re-sorted");
        if (options.dedup_code) {
          std::set<std::string> codes;
          std::erase_if(list.candidates,
                        [&codes](const Candidate& c) { return !codes.insert(c.code).second; });
        }
        if (list.candidates.size() > options.beam) list.candidates.resize(options.beam);
        if (list.candidates.empty()) {
          if (options.gold_backfill) {
            list.candidates.push_back({rows[i].code, options.backfill_log_prob, 1});
          } else if (reject_reason.empty()) {
            reject_reason = "line " + std::to_string(index) + " has no candidates";
          }
        }
        for (std::size_t r = 0; r < list.candidates.size(); ++r) list.candidates[r].rank = r + 1;
      }
      lp.instance.candidate_lists.push_back(std::move(list));
    }

    if (reject_reason.empty() && lp.instance.public_tests().empty())
      reject_reason = "no public tests";
    if (reject_reason.empty()) {
      try {
        validate(lp.instance);
      } catch (const StructuralError& e) {
        reject_reason = e.what();
      }
    }
    if (!reject_reason.empty()) {
      rep.rejected.push_back(id + ": " + reject_reason);
      continue;
    }
    out.push_back(std::move(lp));
  }
  return out;
}

void write_pseudocode_tsv(const std::vector<LoadedProblem>& problems, const fs::path& path) {
  auto sorted = problems;
  std::sort(sorted.begin(), sorted.end(), [](const LoadedProblem& a, const LoadedProblem& b) {
    return std::tie(a.probid, a.subid) < std::tie(b.probid, b.subid);
  });
  std::string out = std::string(kPseudocodeHeader) + "\n";
  for (const auto& p : sorted) {
    for (std::size_t i = 0; i < p.instance.lines.size(); ++i) {
      const auto& line = p.instance.lines[i];
      for (const auto* field : {&line.text, &p.gold_code[i]})
        if (field->find_first_of("\t\n") != std::string::npos)
          throw DatasetError(p.instance.id + ": tab or newline inside a TSV field");
      out += line.text + "\t" + p.gold_code[i] + "\t" +
             (i < p.worker_ids.size() ? p.worker_ids[i] : std::string()) + "\t" + p.probid +
             "\t" + p.subid + "\t" + std::to_string(i) + "\t" + std::to_string(line.indent) +
             "\n";
    }
  }
  write_text(path, out);
}

void write_candidates(const std::vector<LoadedProblem>& problems, const fs::path& path) {
  std::vector<const LoadedProblem*> sorted;
  for (const auto& p : problems) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](const LoadedProblem* a, const LoadedProblem* b) {
    return a->instance.id < b->instance.id;
  });
  json header;
  header["format"] = kCandidatesFormat;
  header["version"] = kCandidatesVersion;
  std::string out = header.dump() + "\n";
  for (const auto* p : sorted) {
    for (std::size_t i = 0; i < p->instance.lines.size(); ++i) {
      if (p->instance.lines[i].is_fixed()) continue;
      for (const auto& c : p->instance.candidate_lists[i].candidates) {
        json j;
        j["problem"] = p->instance.id;
        j["line"] = i + 1;
        j["rank"] = c.rank;
        j["code"] = c.code;
        j["log_prob"] = c.log_prob;
        out += j.dump() + "\n";
      }
    }
  }
  write_text(path, out);
}

void write_tests(const std::vector<LoadedProblem>& problems, const fs::path& dir) {
  std::map<std::string, const LoadedProblem*> by_problem;
  for (const auto& p : problems) by_problem.emplace(p.probid, &p);
  for (const auto& [probid, p] : by_problem) {
    write_text(test_path(dir, probid, Visibility::Public),
               format_testcases(p->instance.public_tests()));
    const auto hidden = p->instance.hidden_tests();
    if (!hidden.empty())
      write_text(test_path(dir, probid, Visibility::Hidden), format_testcases(hidden));
  }
}

void write_problem_set(const std::vector<LoadedProblem>& problems, const ProblemFiles& files) {
  write_pseudocode_tsv(problems, files.pseudocode_tsv);
  if (!files.candidates.empty()) write_candidates(problems, files.candidates);
  write_tests(problems, files.tests_dir);
}

}  // namespace pseudosynth
