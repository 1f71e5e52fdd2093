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

#include "shotcap/sft_dataset.h"

#include <map>

#include "shotcap/error.h"
#include "shotcap/json_lines.h"

namespace shotcap::dataset {

std::filesystem::path DefaultReferencesPath(
    const std::filesystem::path& dataset_path) {
  std::filesystem::path out = dataset_path;
  out.replace_filename(dataset_path.stem().string() + ".references.jsonl");
  return out;
}

std::string RenderSftLines(const std::vector<ShotEntry>& entries,
                           prompting::PromptMode mode,
                           std::size_t max_prompt_tokens) {
  std::string out;
  for (const ShotEntry& entry : entries) {
    const prompting::PromptInstance instance = prompting::EnforceBudget(
        prompting::RenderPrompt(entry, mode), max_prompt_tokens);
    Json line;
    line["entry_id"] = entry.entry_id;
    line["video_id"] = entry.video_id;
    line["scope"] = ScopeName(entry.scope);
    line["span"] = Json::array({entry.span.start, entry.span.end});
    if (entry.asr_text) line["asr"] = *entry.asr_text;
    line["prompt"] = prompting::HumanTurn(instance);
    if (mode == prompting::PromptMode::kTrain) {
      line["target"] = entry.target_text;
      line["text"] = instance.text;
    }
    out += ToJsonLine(line);
  }
  return out;
}

std::string RenderReferenceLines(const std::vector<ShotEntry>& entries) {
  std::string out;
  for (const ShotEntry& entry : entries) {
    Json line;
    line["entry_id"] = entry.entry_id;
    line["scope"] = ScopeName(entry.scope);
    line["reference"] = entry.target_text;
    out += ToJsonLine(line);
  }
  return out;
}

std::size_t WriteSftDataset(const std::vector<ShotEntry>& entries,
                            prompting::PromptMode mode,
                            const std::filesystem::path& path,
                            const SftWriteOptions& options) {
  WriteTextFile(path, RenderSftLines(entries, mode, options.max_prompt_tokens));
  if (mode == prompting::PromptMode::kEval) {
    const std::filesystem::path refs = options.references_path.empty()
                                           ? DefaultReferencesPath(path)
                                           : options.references_path;
    WriteTextFile(refs, RenderReferenceLines(entries));
  }
  return entries.size();
}

std::vector<ReferenceRecord> ParseReferences(std::string_view text,
                                             std::string_view source) {
  std::vector<ReferenceRecord> records;
  std::size_t index = 0;
  for (const Json& line : ParseJsonLines(text, source)) {
    const std::string context =
        std::string(source) + " record " + std::to_string(++index);
    ReferenceRecord record;
    record.entry_id = RequireString(line, "entry_id", context);
    std::string scope;
    if (OptionalString(line, "scope", context, &scope)) {
      record.scope = ParseScope(scope);
    }
    auto many = line.find("references");
    if (many != line.end()) {
      if (!many->is_array() || many->empty()) {
        throw ParseError("'references' must be a non-empty array in " + context,
                         0, 0);
      }
      for (const Json& r : *many) {
        if (!r.is_string()) {
          throw ParseError("non-string reference in " + context, 0, 0);
        }
        record.references.push_back(r.get<std::string>());
      }
    } else {
      record.references.push_back(RequireString(line, "reference", context));
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<ReferenceRecord> LoadReferences(const std::filesystem::path& path) {
  return ParseReferences(ReadTextFile(path), path.string());
}

std::vector<ShotEntry> ParseSftDataset(
    std::string_view text, std::string_view source,
    const std::vector<ReferenceRecord>* references) {
  std::map<std::string, const ReferenceRecord*> by_id;
  if (references != nullptr) {
    for (const ReferenceRecord& r : *references) by_id[r.entry_id] = &r;
  }
  std::vector<ShotEntry> entries;
  std::size_t index = 0;
  for (const Json& line : ParseJsonLines(text, source)) {
    const std::string context =
        std::string(source) + " record " + std::to_string(++index);
    ShotEntry entry;
    entry.entry_id = RequireString(line, "entry_id", context);
    entry.video_id = RequireString(line, "video_id", context);
    entry.scope = ParseScope(RequireString(line, "scope", context));
    auto span = line.find("span");
    if (span == line.end() || !span->is_array() || span->size() != 2 ||
        !(*span)[0].is_number_integer() || !(*span)[1].is_number_integer()) {
      throw ParseError("'span' must be [start, end] in " + context, 0, 0);
    }
    entry.span = {(*span)[0].get<FrameIndex>(), (*span)[1].get<FrameIndex>()};
    std::string value;
    if (OptionalString(line, "asr", context, &value)) entry.asr_text = value;
    if (OptionalString(line, "target", context, &value)) {
      entry.target_text = value;
    } else if (auto it = by_id.find(entry.entry_id); it != by_id.end()) {
      entry.target_text = it->second->references.front();
    } else if (references != nullptr) {
      throw ParseError("no reference for entry '" + entry.entry_id + "' in " +
                           context,
                       0, 0);
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<ShotEntry> LoadSftDataset(
    const std::filesystem::path& path,
    const std::vector<ReferenceRecord>* references) {
  return ParseSftDataset(ReadTextFile(path), path.string(), references);
}

}  // namespace shotcap::dataset
