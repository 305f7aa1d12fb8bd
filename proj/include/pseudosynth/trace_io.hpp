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
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "pseudosynth/eval.hpp"
#include "pseudosynth/search.hpp"

namespace pseudosynth {

inline constexpr const char* kTraceFormat = "pseudosynth-trace";
inline constexpr int kTraceVersion = 1;

struct RunHeader {
  std::string problem;
  std::string method;
  std::string tag;
  std::size_t budget = 0;
  double alpha = 0.1;
  std::uint64_t seed = 0;
};

/// One run: a "run" line, one "trial" line per record, a "result" line.
/// Several runs may be concatenated in one stream.
void write_trace(std::ostream& out, const RunHeader& header, const SearchResult& result);

struct TraceRun {
  RunHeader header;
  std::vector<TrialRecord> records;
  RunDigest digest;
  std::string status;
};

/// Throws EvalError with a line number on malformed input.
std::vector<TraceRun> read_traces(std::istream& in);
RunSummary read_trace_digests(std::istream& in);

RunDigest make_digest(const RunHeader& header, const SearchResult& result);

}  // namespace pseudosynth
