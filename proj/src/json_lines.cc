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

#include "shotcap/json_lines.h"

#include <fstream>
#include <sstream>

#include "shotcap/error.h"

namespace shotcap {
namespace {

void LineColumnAt(std::string_view text, std::size_t offset, std::size_t* line,
                  std::size_t* column) {
  *line = 1;
  *column = 1;
  if (offset > text.size()) offset = text.size();
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++*line;
      *column = 1;
    } else {
      ++*column;
    }
  }
}

std::string FieldContext(const char* field, std::string_view context) {
  std::string out = "field '";
  out += field;
  out += "'";
  if (!context.empty()) {
    out += " in ";
    out += context;
  }
  return out;
}

}  // namespace

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return buffer.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

Json ParseJsonDocument(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 0;
    std::size_t column = 0;
    // The library reports the 1-based index of the byte it choked on.
    LineColumnAt(text, e.byte == 0 ? 0 : e.byte - 1, &line, &column);
    throw ParseError("malformed document '" + std::string(source) + "'", line,
                     column);
  }
}

std::vector<Json> ParseJsonLines(std::string_view text,
                                 std::string_view source) {
  std::vector<Json> values;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      values.push_back(Json::parse(line.begin(), line.end()));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("malformed line in '" + std::string(source) + "'",
                       line_no, e.byte == 0 ? 1 : e.byte);
    }
    if (!values.back().is_object()) {
      throw ParseError("expected an object per line in '" +
                           std::string(source) + "'",
                       line_no, 1);
    }
  }
  return values;
}

std::vector<Json> ReadJsonLines(const std::filesystem::path& path) {
  return ParseJsonLines(ReadTextFile(path), path.string());
}

std::string ToJsonLine(const Json& value) { return value.dump() + "\n"; }

std::string RequireString(const Json& object, const char* field,
                          std::string_view context) {
  auto it = object.find(field);
  if (it == object.end() || !it->is_string()) {
    throw ParseError("missing or non-string " + FieldContext(field, context), 0,
                     0);
  }
  return it->get<std::string>();
}

long long RequireInteger(const Json& object, const char* field,
                         std::string_view context) {
  auto it = object.find(field);
  if (it == object.end() || !it->is_number_integer()) {
    throw ParseError("missing or non-integer " + FieldContext(field, context),
                     0, 0);
  }
  return it->get<long long>();
}

double RequireNumber(const Json& object, const char* field,
                     std::string_view context) {
  auto it = object.find(field);
  if (it == object.end() || !it->is_number()) {
    throw ParseError("missing or non-numeric " + FieldContext(field, context),
                     0, 0);
  }
  return it->get<double>();
}

bool OptionalString(const Json& object, const char* field,
                    std::string_view context, std::string* out) {
  auto it = object.find(field);
  if (it == object.end() || it->is_null()) return false;
  if (!it->is_string()) {
    throw ParseError("non-string " + FieldContext(field, context), 0, 0);
  }
  *out = it->get<std::string>();
  return true;
}

}  // namespace shotcap
