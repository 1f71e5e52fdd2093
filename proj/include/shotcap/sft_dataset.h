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

#ifndef SHOTCAP_SFT_DATASET_H_
#define SHOTCAP_SFT_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shotcap/dataset.h"
#include "shotcap/prompting.h"

namespace shotcap::dataset {

struct SftWriteOptions {
  std::size_t max_prompt_tokens = prompting::kDefaultMaxPromptTokens;
  // Eval mode only. Empty means DefaultReferencesPath(dataset path).
  std::filesystem::path references_path;
};

// "<stem>.references.jsonl" next to the dataset file.
std::filesystem::path DefaultReferencesPath(
    const std::filesystem::path& dataset_path);

// Dialogue lines for `entries`. Train lines hold the human turn, the target and
// the full rendering; eval lines hold only the human turn.
std::string RenderSftLines(const std::vector<ShotEntry>& entries,
                           prompting::PromptMode mode,
                           std::size_t max_prompt_tokens);
std::string RenderReferenceLines(const std::vector<ShotEntry>& entries);

// Writes the dialogue file (and, in eval mode, the references file). Returns
// the number of dialogue objects written.
std::size_t WriteSftDataset(const std::vector<ShotEntry>& entries,
                            prompting::PromptMode mode,
                            const std::filesystem::path& path,
                            const SftWriteOptions& options = {});

struct ReferenceRecord {
  std::string entry_id;
  std::vector<std::string> references;
  std::optional<Scope> scope;
};

// Lines carry either "reference" (one string) or "references" (an array).
std::vector<ReferenceRecord> ParseReferences(std::string_view text,
                                             std::string_view source);
std::vector<ReferenceRecord> LoadReferences(const std::filesystem::path& path);

// Reads a dialogue file back into entries. Targets come from the lines
// themselves (train files) or from `references` (eval files); an eval file
// read without references yields empty targets.
std::vector<ShotEntry> ParseSftDataset(
    std::string_view text, std::string_view source,
    const std::vector<ReferenceRecord>* references = nullptr);
std::vector<ShotEntry> LoadSftDataset(
    const std::filesystem::path& path,
    const std::vector<ReferenceRecord>* references = nullptr);

}  // namespace shotcap::dataset

#endif  // SHOTCAP_SFT_DATASET_H_
