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

#include "shotcap/error.h"

#include <sstream>
#include <utility>

namespace shotcap {
namespace {

std::string PositionSuffix(std::size_t line, std::size_t column) {
  if (line == 0) return "";
  std::ostringstream out;
  out << " (line " << line << ", column " << column << ")";
  return out.str();
}

std::string JoinIds(const std::vector<std::string>& ids) {
  std::string joined;
  for (const auto& id : ids) {
    if (!joined.empty()) joined += ", ";
    joined += id;
  }
  return joined;
}

std::string AlignmentMessage(const std::vector<std::string>& missing,
                             const std::vector<std::string>& duplicated,
                             const std::vector<std::string>& unexpected) {
  std::string message = "entry ids do not align";
  if (!missing.empty()) message += "; missing predictions: " + JoinIds(missing);
  if (!duplicated.empty()) message += "; duplicated ids: " + JoinIds(duplicated);
  if (!unexpected.empty())
    message += "; predictions without references: " + JoinIds(unexpected);
  return message;
}

}  // namespace

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return "invalid_argument";
    case ErrorKind::kParse:
      return "parse";
    case ErrorKind::kIo:
      return "io";
    case ErrorKind::kAlignment:
      return "alignment";
    case ErrorKind::kBudget:
      return "budget";
    case ErrorKind::kConfig:
      return "config";
    case ErrorKind::kBackend:
      return "backend";
  }
  return "unknown";
}

ParseError::ParseError(const std::string& message, std::size_t line,
                       std::size_t column)
    : Error(ErrorKind::kParse, message + PositionSuffix(line, column)),
      line_(line),
      column_(column) {}

AlignmentError::AlignmentError(std::vector<std::string> missing,
                               std::vector<std::string> duplicated,
                               std::vector<std::string> unexpected)
    : Error(ErrorKind::kAlignment,
            AlignmentMessage(missing, duplicated, unexpected)),
      missing_(std::move(missing)),
      duplicated_(std::move(duplicated)),
      unexpected_(std::move(unexpected)) {}

}  // namespace shotcap
