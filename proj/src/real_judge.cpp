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

#include "pseudosynth/real_judge.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pseudosynth/process.hpp"

namespace pseudosynth {

namespace {

constexpr const char* kSourceName = "main.cpp";
constexpr const char* kBinaryName = "prog";

std::vector<std::string> split_flags(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

RealJudgeConfig RealJudgeConfig::from_environment() {
  RealJudgeConfig config;
  if (const char* cxx = std::getenv("PSEUDOSYNTH_CXX"); cxx && *cxx)
    config.compiler = cxx;
  if (const char* flags = std::getenv("PSEUDOSYNTH_CXXFLAGS"); flags)
    config.flags = split_flags(flags);
  return config;
}

bool compiler_available(const RealJudgeConfig& config) {
  return find_executable(config.compiler).has_value();
}

RealJudge::RealJudge(RealJudgeConfig config) : config_(std::move(config)) {}

std::size_t RealJudge::cache_hits() const {
  std::lock_guard lock(cache_mutex_);
  return cache_hits_;
}

CompileResult RealJudge::compile(const Program& program) {
  const std::string& source = program.source.text;
  if (config_.compile_cache) {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(source); it != cache_.end()) {
      ++cache_hits_;
      return it->second;
    }
  }
  auto result = compile_uncached(source);
  if (config_.compile_cache) {
    std::lock_guard lock(cache_mutex_);
    cache_.emplace(source, result);
  }
  return result;
}

CompileResult RealJudge::compile_uncached(const std::string& source) {
  auto workspace = std::make_shared<ScratchDir>("pseudosynth-judge");
  const auto src_path = workspace->path() / kSourceName;
  {
    std::ofstream out(src_path, std::ios::binary);
    out << source;
    if (!out) throw JudgeInfrastructureError("cannot write " + src_path.string());
  }
  ProcessOptions opts;
  opts.argv.push_back(config_.compiler);
  opts.argv.insert(opts.argv.end(), config_.flags.begin(), config_.flags.end());
  opts.argv.insert(opts.argv.end(), {kSourceName, "-o", kBinaryName});
  opts.cwd = workspace->path();
  opts.timeout = config_.compile_timeout;
  opts.output_cap = 16 << 20;

  ProcessResult proc;
  try {
    proc = run_process(opts);
  } catch (const ProcessError& e) {
    throw JudgeInfrastructureError(e.what());
  }
  if (proc.exited_cleanly()) {
    auto artifact = std::make_shared<Artifact>();
    artifact->executable = workspace->path() / kBinaryName;
    artifact->workspace = workspace;
    return CompileSuccess{std::move(artifact)};
  }
  if (proc.exit_code == 127 && proc.stderr_data.empty())
    throw JudgeInfrastructureError("compiler '" + config_.compiler + "' not runnable");

  CompileFailure failure;
  failure.raw_stderr = proc.stderr_data;
  if (proc.timed_out) {
    failure.message = "compilation timed out";
    return failure;
  }
  if (auto diag = parse_first_error(proc.stderr_data)) {
    failure.message = diag->message;
    if (diag->file == kSourceName ||
        diag->file.ends_with(std::string("/") + kSourceName)) {
      failure.physical_line = diag->line;
      failure.column = diag->column;
    }
  } else {
    // Linker errors and compiler crashes carry no usable location.
    const auto nl = proc.stderr_data.find('\n');
    failure.message = proc.stderr_data.substr(0, nl);
    if (failure.message.empty()) failure.message = "compilation failed";
  }
  return failure;
}

RunResult RealJudge::run(const Artifact& artifact, const TestCase& test) {
  ProcessOptions opts;
  opts.argv = {artifact.executable.string()};
  opts.stdin_data = test.input;
  opts.timeout = config_.test_timeout;
  opts.output_cap = config_.output_cap;
  opts.cwd = artifact.executable.parent_path();
  ProcessResult proc;
  try {
    proc = run_process(opts);
  } catch (const ProcessError& e) {
    throw JudgeInfrastructureError(e.what());
  }
  if (proc.timed_out) return RunTimeout{};
  if (proc.output_truncated) return RunWrongOutput{std::move(proc.stdout_data)};
  if (proc.term_signal != 0) return RunRuntimeError{128 + proc.term_signal};
  if (proc.exit_code != 0) return RunRuntimeError{proc.exit_code};
  if (normalize_output(proc.stdout_data) != normalize_output(test.expected_output))
    return RunWrongOutput{std::move(proc.stdout_data)};
  return RunPassed{};
}

}  // namespace pseudosynth
