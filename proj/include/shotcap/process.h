// Copyright 2026 The Shotcap Authors.
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

#ifndef SHOTCAP_PROCESS_H_
#define SHOTCAP_PROCESS_H_

#include <sys/types.h>

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace shotcap::process {

// Resolves a program name the way a shell would: names containing '/' are
// checked directly, bare names are searched on $PATH.
std::optional<std::filesystem::path> FindExecutable(std::string_view name);

// First whitespace-separated word of a command line.
std::string CommandProgram(std::string_view command);

// Single-quotes `value` for /bin/sh.
std::string ShellQuote(std::string_view value);

struct CommandResult {
  int exit_code = -1;  // -1 when killed by a signal or timed out
  bool timed_out = false;
};

// Runs `/bin/sh -c command` with stdin/stdout/stderr on /dev/null and waits
// for it. A zero timeout waits indefinitely.
CommandResult RunShellCommand(const std::string& command,
                              std::chrono::milliseconds timeout =
                                  std::chrono::milliseconds::zero());

// A child process spoken to one line at a time over its stdin/stdout.
// Not thread-safe; one owner drives it.
class LineProcess {
 public:
  enum class ReadStatus { kLine, kTimeout, kEof };

  // Starts `/bin/sh -c command`. stderr is inherited.
  static std::unique_ptr<LineProcess> Spawn(const std::string& command);

  ~LineProcess();
  LineProcess(const LineProcess&) = delete;
  LineProcess& operator=(const LineProcess&) = delete;

  // Appends '\n'. Returns false if the child closed its end.
  bool WriteLine(std::string_view line);

  ReadStatus ReadLine(std::string* line, std::chrono::milliseconds timeout);

  // Closes the child's stdin and reaps it, killing it after `grace`.
  // Returns the exit code, or -1 if it had to be killed.
  int CloseAndWait(std::chrono::milliseconds grace);

  pid_t pid() const { return pid_; }

 private:
  LineProcess(pid_t pid, int stdin_fd, int stdout_fd)
      : pid_(pid), stdin_fd_(stdin_fd), stdout_fd_(stdout_fd) {}

  pid_t pid_;
  int stdin_fd_;
  int stdout_fd_;
  bool reaped_ = false;
  int exit_code_ = -1;
  std::string buffer_;
};

}  // namespace shotcap::process

#endif  // SHOTCAP_PROCESS_H_
