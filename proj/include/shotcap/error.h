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

#ifndef SHOTCAP_ERROR_H_
#define SHOTCAP_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace shotcap {

// Outcome categories shared by every module. The CLI maps these onto exit
// codes, so each thrown error must carry exactly one of them.
enum class ErrorKind {
  kInvalidArgument,
  kParse,
  kIo,
  kAlignment,
  kBudget,
  kConfig,
  kBackend,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& message)
      : Error(ErrorKind::kInvalidArgument, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorKind::kIo, message) {}
};

// Malformed structured text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message, std::size_t line = 0,
                      std::size_t column = 0);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class AlignmentError : public Error {
 public:
  AlignmentError(std::vector<std::string> missing,
                 std::vector<std::string> duplicated,
                 std::vector<std::string> unexpected);

  const std::vector<std::string>& missing() const { return missing_; }
  const std::vector<std::string>& duplicated() const { return duplicated_; }
  const std::vector<std::string>& unexpected() const { return unexpected_; }

 private:
  std::vector<std::string> missing_;
  std::vector<std::string> duplicated_;
  std::vector<std::string> unexpected_;
};

class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& message)
      : Error(ErrorKind::kBudget, message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorKind::kConfig, message) {}
};

class BackendError : public Error {
 public:
  explicit BackendError(const std::string& message)
      : Error(ErrorKind::kBackend, message) {}
};

}  // namespace shotcap

#endif  // SHOTCAP_ERROR_H_
