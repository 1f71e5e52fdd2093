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

#ifndef SHOTCAP_JSON_LINES_H_
#define SHOTCAP_JSON_LINES_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace shotcap {

using Json = nlohmann::ordered_json;

// Reads a whole file. Throws IoError when it cannot be opened.
std::string ReadTextFile(const std::filesystem::path& path);

// Writes `content` to `path`, replacing any previous file. Missing parent
// directories are created.
void WriteTextFile(const std::filesystem::path& path, std::string_view content);

// Parses one structured-text document. Syntax errors become ParseError with
// the 1-based line/column of the offending byte; `source` names the input in
// the message.
Json ParseJsonDocument(std::string_view text, std::string_view source);

// One object per non-blank line.
std::vector<Json> ParseJsonLines(std::string_view text, std::string_view source);
std::vector<Json> ReadJsonLines(const std::filesystem::path& path);

// Compact single-line serialization terminated by '\n'.
std::string ToJsonLine(const Json& value);

// Typed field access for schema validation; failures throw ParseError naming
// the field and `context`.
std::string RequireString(const Json& object, const char* field,
                          std::string_view context);
long long RequireInteger(const Json& object, const char* field,
                         std::string_view context);
double RequireNumber(const Json& object, const char* field,
                     std::string_view context);
// Absent and null both read as "no value".
bool OptionalString(const Json& object, const char* field,
                    std::string_view context, std::string* out);

}  // namespace shotcap

#endif  // SHOTCAP_JSON_LINES_H_
