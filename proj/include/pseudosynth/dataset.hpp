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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "pseudosynth/core_types.hpp"

namespace pseudosynth {

/// Schema violation in an input file. The message carries "path:line:".
class DatasetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Pseudocode table columns, in order.
inline constexpr const char* kPseudocodeHeader =
    "text\tcode\tworkerid\tprobid\tsubid\tline\tindent";
inline constexpr const char* kCandidatesFormat = "pseudosynth-candidates";
inline constexpr int kCandidatesVersion = 1;
inline constexpr const char* kEndInput = "###ENDINPUT###";
inline constexpr const char* kEndOutput = "###ENDOUTPUT###";

struct ProblemFiles {
  std::filesystem::path pseudocode_tsv;
  std::filesystem::path candidates;  // empty: every line gets its gold code
  std::filesystem::path tests_dir;   // <dir>/<probid>/<probid>_testcases_{public,hidden}.txt
};

struct LoadOptions {
  std::size_t beam = 100;
  std::size_t budget = 100;
  bool gold_backfill = false;
  double backfill_log_prob = -20.0;
  /// Drop candidates whose code repeats a higher-ranked candidate.
  bool dedup_code = false;
};

/// One program: the search instance plus the gold code it was annotated from.
struct LoadedProblem {
  ProblemInstance instance;
  std::vector<std::string> gold_code;
  std::string probid;
  std::string subid;
  std::vector<std::string> worker_ids;  // per line
};

struct LoadReport {
  std::vector<std::string> warnings;
  std::vector<std::string> rejected;  // "id: reason"
};

/// Instance ids are "<probid>-<subid>".
std::vector<LoadedProblem> load_problem_set(const ProblemFiles& files, const LoadOptions& options,
                                            LoadReport* report = nullptr);

/// Parses one test file in the ###ENDINPUT### / ###ENDOUTPUT### layout.
std::vector<TestCase> parse_testcases(const std::string& text, Visibility visibility);
std::string format_testcases(const std::vector<TestCase>& tests);

// Canonical writers: problems sorted by id, lines in order, ranks ascending.
void write_pseudocode_tsv(const std::vector<LoadedProblem>& problems,
                          const std::filesystem::path& path);
void write_candidates(const std::vector<LoadedProblem>& problems,
                      const std::filesystem::path& path);
void write_tests(const std::vector<LoadedProblem>& problems, const std::filesystem::path& dir);
void write_problem_set(const std::vector<LoadedProblem>& problems, const ProblemFiles& files);

}  // namespace pseudosynth
