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

#include <sys/types.h>

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pseudosynth {

/// Failure to set up or talk to a child process (as opposed to the child
/// itself misbehaving).
class ProcessError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ProcessOptions {
  std::vector<std::string> argv;
  std::string stdin_data;
  std::chrono::milliseconds timeout{2000};
  std::size_t output_cap = 1 << 20;
  std::filesystem::path cwd;  // empty = inherit
};

struct ProcessResult {
  int exit_code = -1;  // valid when term_signal == 0
  int term_signal = 0;
  bool timed_out = false;
  bool output_truncated = false;
  std::string stdout_data;
  std::string stderr_data;

  bool exited_cleanly() const {
    return !timed_out && term_signal == 0 && exit_code == 0;
  }
};

/// Runs a child to completion, feeding stdin and collecting both output
/// streams. The child runs in its own process group, which is killed on
/// timeout or when output exceeds the cap.
ProcessResult run_process(const ProcessOptions& options);

/// Looks up an executable in PATH (or checks an explicit path).
std::optional<std::filesystem::path> find_executable(const std::string& name);

/// Temporary directory removed on destruction.
class ScratchDir {
public:
  explicit ScratchDir(const std::string& tag = "pseudosynth");
  ~ScratchDir();
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

/// Long-lived child speaking a line-oriented protocol on stdin/stdout.
class PipedProcess {
public:
  explicit PipedProcess(const std::vector<std::string>& argv);
  ~PipedProcess();
  PipedProcess(const PipedProcess&) = delete;
  PipedProcess& operator=(const PipedProcess&) = delete;

  /// Writes `line` plus '\n'. Returns false if the child is gone.
  bool write_line(const std::string& line);
  /// Next '\n'-terminated line (without the terminator), or nullopt on EOF
  /// or timeout.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);
  void terminate();

private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

}  // namespace pseudosynth
