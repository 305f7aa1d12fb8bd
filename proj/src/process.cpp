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

#include "pseudosynth/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <mutex>

extern char** environ;

namespace pseudosynth {

namespace {

using Clock = std::chrono::steady_clock;

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

struct Pipe {
  int read_end = -1;
  int write_end = -1;

  Pipe() {
    int fds[2];
    if (::pipe2(fds, O_CLOEXEC) != 0)
      throw ProcessError(std::string("pipe2: ") + std::strerror(errno));
    read_end = fds[0];
    write_end = fds[1];
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  void close_read() {
    if (read_end >= 0) ::close(read_end);
    read_end = -1;
  }
  void close_write() {
    if (write_end >= 0) ::close(write_end);
    write_end = -1;
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;
};

void set_nonblocking(int fd) {
  const int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

class SpawnSetup {
public:
  SpawnSetup() {
    posix_spawn_file_actions_init(&actions_);
    posix_spawnattr_init(&attr_);
  }
  ~SpawnSetup() {
    posix_spawn_file_actions_destroy(&actions_);
    posix_spawnattr_destroy(&attr_);
  }
  SpawnSetup(const SpawnSetup&) = delete;
  SpawnSetup& operator=(const SpawnSetup&) = delete;

  posix_spawn_file_actions_t actions_;
  posix_spawnattr_t attr_;
};

pid_t spawn(const std::vector<std::string>& argv, int child_stdin,
            int child_stdout, int child_stderr,
            const std::filesystem::path& cwd) {
  if (argv.empty()) throw ProcessError("empty argv");
  SpawnSetup setup;
  posix_spawn_file_actions_adddup2(&setup.actions_, child_stdin, 0);
  posix_spawn_file_actions_adddup2(&setup.actions_, child_stdout, 1);
  if (child_stderr >= 0)
    posix_spawn_file_actions_adddup2(&setup.actions_, child_stderr, 2);
  if (!cwd.empty())
    posix_spawn_file_actions_addchdir_np(&setup.actions_, cwd.c_str());
  posix_spawnattr_setflags(&setup.attr_, POSIX_SPAWN_SETPGROUP |
                                             POSIX_SPAWN_SETSIGDEF);
  posix_spawnattr_setpgroup(&setup.attr_, 0);
  sigset_t defaults;
  sigemptyset(&defaults);
  sigaddset(&defaults, SIGPIPE);
  posix_spawnattr_setsigdefault(&setup.attr_, &defaults);

  std::vector<char*> args;
  args.reserve(argv.size() + 1);
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);
  pid_t pid = -1;
  const int rc = posix_spawnp(&pid, args[0], &setup.actions_, &setup.attr_,
                              args.data(), environ);
  if (rc != 0)
    throw ProcessError("cannot spawn '" + argv[0] + "': " + std::strerror(rc));
  return pid;
}

void kill_group(pid_t pid) {
  ::kill(-pid, SIGKILL);
  ::kill(pid, SIGKILL);
}

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
      deadline - Clock::now());
  return left.count() < 0 ? 0 : static_cast<int>(left.count());
}

}  // namespace

ProcessResult run_process(const ProcessOptions& options) {
  ignore_sigpipe();
  Pipe in, out, err;
  const pid_t pid = spawn(options.argv, in.read_end, out.write_end,
                          err.write_end, options.cwd);
  in.close_read();
  out.close_write();
  err.close_write();
  set_nonblocking(in.write_end);
  set_nonblocking(out.read_end);
  set_nonblocking(err.read_end);

  ProcessResult result;
  std::size_t written = 0;
  if (options.stdin_data.empty()) in.close_write();
  const auto deadline = Clock::now() + options.timeout;
  bool killed = false;
  char buf[65536];

  while (out.read_end >= 0 || err.read_end >= 0) {
    pollfd fds[3];
    int n = 0;
    int idx_in = -1, idx_out = -1, idx_err = -1;
    if (in.write_end >= 0) { idx_in = n; fds[n++] = {in.write_end, POLLOUT, 0}; }
    if (out.read_end >= 0) { idx_out = n; fds[n++] = {out.read_end, POLLIN, 0}; }
    if (err.read_end >= 0) { idx_err = n; fds[n++] = {err.read_end, POLLIN, 0}; }
    const int wait = remaining_ms(deadline);
    const int ready = ::poll(fds, static_cast<nfds_t>(n), wait);
    if (ready < 0) {
      if (errno == EINTR) continue;
      kill_group(pid);
      ::waitpid(pid, nullptr, 0);
      throw ProcessError(std::string("poll: ") + std::strerror(errno));
    }
    if (ready == 0 && remaining_ms(deadline) == 0) {
      result.timed_out = true;
      kill_group(pid);
      killed = true;
      break;
    }
    if (idx_in >= 0 && (fds[idx_in].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const auto chunk = options.stdin_data.size() - written;
      const ssize_t w = ::write(in.write_end, options.stdin_data.data() + written, chunk);
      if (w > 0) written += static_cast<std::size_t>(w);
      if (w < 0 && errno != EAGAIN && errno != EINTR) written = options.stdin_data.size();
      if (written >= options.stdin_data.size()) in.close_write();
    }
    auto drain = [&](int idx, Pipe& pipe, std::string& sink) {
      if (idx < 0 || !(fds[idx].revents & (POLLIN | POLLERR | POLLHUP))) return;
      const ssize_t r = ::read(pipe.read_end, buf, sizeof buf);
      if (r > 0) {
        sink.append(buf, static_cast<std::size_t>(r));
      } else if (r == 0 || (errno != EAGAIN && errno != EINTR)) {
        pipe.close_read();
      }
    };
    drain(idx_out, out, result.stdout_data);
    drain(idx_err, err, result.stderr_data);
    if (result.stdout_data.size() + result.stderr_data.size() > options.output_cap) {
      result.output_truncated = true;
      if (result.stdout_data.size() > options.output_cap) result.stdout_data.resize(options.output_cap);
      result.stderr_data.resize(
          std::min(result.stderr_data.size(), options.output_cap - result.stdout_data.size()));
      kill_group(pid);
      killed = true;
      break;
    }
  }

  int status = 0;
  while (true) {
    if (!killed) {
      const pid_t got = ::waitpid(pid, &status, WNOHANG);
      if (got == pid) break;
      if (got < 0 && errno != EINTR) break;
      if (remaining_ms(deadline) == 0) {
        result.timed_out = true;
        kill_group(pid);
        killed = true;
        continue;
      }
      ::usleep(1000);
    } else {
      if (::waitpid(pid, &status, 0) == pid || errno != EINTR) break;
    }
  }
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  if (WIFSIGNALED(status)) result.term_signal = WTERMSIG(status);
  if (killed && !result.timed_out && !result.output_truncated) result.timed_out = true;
  return result;
}

std::optional<std::filesystem::path> find_executable(const std::string& name) {
  namespace fs = std::filesystem;
  if (name.find('/') != std::string::npos) {
    if (::access(name.c_str(), X_OK) == 0) return fs::path(name);
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  if (!path) return std::nullopt;
  std::string all(path);
  std::size_t start = 0;
  while (start <= all.size()) {
    auto colon = all.find(':', start);
    if (colon == std::string::npos) colon = all.size();
    const fs::path candidate = fs::path(all.substr(start, colon - start)) / name;
    if (::access(candidate.c_str(), X_OK) == 0) return candidate;
    start = colon + 1;
  }
  return std::nullopt;
}

ScratchDir::ScratchDir(const std::string& tag) {
  auto pattern = (std::filesystem::temp_directory_path() / (tag + "-XXXXXX")).string();
  if (::mkdtemp(pattern.data()) == nullptr)
    throw ProcessError(std::string("mkdtemp: ") + std::strerror(errno));
  path_ = pattern;
}

ScratchDir::~ScratchDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

PipedProcess::PipedProcess(const std::vector<std::string>& argv) {
  ignore_sigpipe();
  Pipe in, out;
  pid_ = spawn(argv, in.read_end, out.write_end, -1, {});
  to_child_ = in.write_end;
  in.write_end = -1;
  from_child_ = out.read_end;
  out.read_end = -1;
}

PipedProcess::~PipedProcess() { terminate(); }

bool PipedProcess::write_line(const std::string& line) {
  if (to_child_ < 0) return false;
  std::string data = line + '\n';
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t w = ::write(to_child_, data.data() + done, data.size() - done);
    if (w < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    done += static_cast<std::size_t>(w);
  }
  return true;
}

std::optional<std::string> PipedProcess::read_line(std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  char buf[4096];
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    if (from_child_ < 0) return std::nullopt;
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, remaining_ms(deadline));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) return std::nullopt;
    const ssize_t r = ::read(from_child_, buf, sizeof buf);
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) {
      ::close(from_child_);
      from_child_ = -1;
      return std::nullopt;
    }
    buffer_.append(buf, static_cast<std::size_t>(r));
  }
}

void PipedProcess::terminate() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    kill_group(pid_);
    ::waitpid(pid_, nullptr, 0);
    pid_ = -1;
  }
}

}  // namespace pseudosynth
