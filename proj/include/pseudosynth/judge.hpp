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
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "pseudosynth/assembler.hpp"
#include "pseudosynth/core_types.hpp"

namespace pseudosynth {

/// The judge could not do its job (compiler missing, sandbox setup failed,
/// protocol misuse). Never a verdict about the program itself.
class JudgeInfrastructureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// What gets compiled. `selection` is set whenever the source came from a
/// candidate selection; `prefix_len` < L marks a completed prefix probe.
struct Program {
  AssembledSource source;
  std::optional<Selection> selection;
  std::size_t prefix_len = 0;
};

/// Opaque handle to a compiled program. Real judges keep the executable in
/// a scratch workspace that lives as long as the handle.
struct Artifact {
  std::filesystem::path executable;
  std::shared_ptr<void> workspace;
  std::optional<Selection> selection;
};

struct CompileSuccess {
  std::shared_ptr<const Artifact> artifact;
};

struct CompileFailure {
  std::optional<std::size_t> physical_line;  // nullopt for linker/ICE errors
  std::optional<std::size_t> column;
  std::string message;
  std::string raw_stderr;
};

using CompileResult = std::variant<CompileSuccess, CompileFailure>;

inline bool compiled(const CompileResult& r) {
  return std::holds_alternative<CompileSuccess>(r);
}

struct RunPassed {};
struct RunWrongOutput {
  std::string actual;
};
struct RunRuntimeError {
  int exit_status = 0;
};
struct RunTimeout {};

using RunResult = std::variant<RunPassed, RunWrongOutput, RunRuntimeError, RunTimeout>;

class Judge {
public:
  virtual ~Judge() = default;
  virtual CompileResult compile(const Program& program) = 0;
  virtual RunResult run(const Artifact& artifact, const TestCase& test) = 0;
};

/// Canonical form for output comparison: CRLF -> LF, trailing whitespace
/// stripped per line, trailing blank lines dropped.
std::string normalize_output(std::string_view text);

struct ParsedDiagnostic {
  std::string file;
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;

  friend bool operator==(const ParsedDiagnostic&, const ParsedDiagnostic&) = default;
};

/// First "<file>:<line>:<col>: error: <message>" record in compiler output.
/// Fatal errors count as errors; warnings and notes do not.
std::optional<ParsedDiagnostic> parse_first_error(std::string_view stderr_text);

/// Runs the tests in order and stops at the first failure.
TrialOutcome run_public_tests(Judge& judge, const Artifact& artifact,
                              std::span<const TestCase> tests);

/// Converts a failed compile into a trial outcome with the reported line
/// mapped back to a logical line.
CompileErrorOutcome to_outcome(const CompileFailure& failure,
                               const AssembledSource& source);

/// Decorator that counts compile calls; used to audit trial accounting.
class CountingJudge : public Judge {
public:
  explicit CountingJudge(Judge& inner) : inner_(inner) {}
  CompileResult compile(const Program& program) override {
    ++compiles_;
    return inner_.compile(program);
  }
  RunResult run(const Artifact& artifact, const TestCase& test) override {
    ++runs_;
    return inner_.run(artifact, test);
  }
  std::size_t compile_calls() const { return compiles_; }
  std::size_t run_calls() const { return runs_; }

private:
  Judge& inner_;
  std::size_t compiles_ = 0;
  std::size_t runs_ = 0;
};

}  // namespace pseudosynth
