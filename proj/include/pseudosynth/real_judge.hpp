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

#include <chrono>
#include <cstddef>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "pseudosynth/judge.hpp"

namespace pseudosynth {

struct RealJudgeConfig {
  std::string compiler = "g++";
  std::vector<std::string> flags = {"-std=c++17", "-O1", "-w",
                                    "-fdiagnostics-color=never"};
  std::chrono::milliseconds compile_timeout{30000};
  std::chrono::milliseconds test_timeout{2000};
  std::size_t output_cap = 1 << 20;
  /// Reuse results for byte-identical sources. Leave off for budgeted search.
  bool compile_cache = false;

  /// Applies PSEUDOSYNTH_CXX / PSEUDOSYNTH_CXXFLAGS when set.
  static RealJudgeConfig from_environment();
};

/// Compiles with an external compiler and runs binaries as child processes.
/// Each compile gets its own scratch directory, so concurrent use is safe.
class RealJudge : public Judge {
public:
  explicit RealJudge(RealJudgeConfig config = {});

  CompileResult compile(const Program& program) override;
  RunResult run(const Artifact& artifact, const TestCase& test) override;

  const RealJudgeConfig& config() const { return config_; }
  std::size_t cache_hits() const;

private:
  CompileResult compile_uncached(const std::string& source);

  RealJudgeConfig config_;
  mutable std::mutex cache_mutex_;
  std::unordered_map<std::string, CompileResult> cache_;
  std::size_t cache_hits_ = 0;
};

/// True when the configured compiler can be found.
bool compiler_available(const RealJudgeConfig& config);

}  // namespace pseudosynth
