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

#include "pseudosynth/judge.hpp"

#include <regex>
#include <vector>

namespace pseudosynth {

std::string normalize_output(std::string_view text) {
  std::vector<std::string> lines;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') continue;
    if (c == '\n') {
      lines.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  lines.push_back(std::move(current));
  for (auto& line : lines) {
    const auto end = line.find_last_not_of(" \t\r\f\v");
    line.erase(end == std::string::npos ? 0 : end + 1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += lines[i];
  }
  return out;
}

std::optional<ParsedDiagnostic> parse_first_error(std::string_view stderr_text) {
  static const std::regex record(
      R"(^(.*?):(\d+):(?:(\d+):)?\s*(?:fatal )?error:\s*(.*)$)");
  std::size_t start = 0;
  while (start < stderr_text.size()) {
    auto nl = stderr_text.find('\n', start);
    if (nl == std::string_view::npos) nl = stderr_text.size();
    const std::string line(stderr_text.substr(start, nl - start));
    start = nl + 1;
    std::smatch m;
    if (std::regex_match(line, m, record)) {
      ParsedDiagnostic d;
      d.file = m[1].str();
      d.line = std::stoul(m[2].str());
      d.column = m[3].matched ? std::stoul(m[3].str()) : 0;
      d.message = m[4].str();
      return d;
    }
  }
  return std::nullopt;
}

TrialOutcome run_public_tests(Judge& judge, const Artifact& artifact,
                              std::span<const TestCase> tests) {
  for (std::size_t k = 0; k < tests.size(); ++k) {
    const auto result = judge.run(artifact, tests[k]);
    if (std::holds_alternative<RunPassed>(result)) continue;
    if (std::holds_alternative<RunWrongOutput>(result))
      return WrongOutputOutcome{k};
    if (const auto* re = std::get_if<RunRuntimeError>(&result))
      return RuntimeErrorOutcome{k, re->exit_status};
    return TimeoutOutcome{k};
  }
  return AcceptedOutcome{};
}

CompileErrorOutcome to_outcome(const CompileFailure& failure,
                               const AssembledSource& source) {
  CompileErrorOutcome out;
  out.message = failure.message;
  if (failure.physical_line)
    out.reported_logical_line =
        map_physical_to_logical(source, *failure.physical_line);
  return out;
}

}  // namespace pseudosynth
