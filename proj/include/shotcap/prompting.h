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

#ifndef SHOTCAP_PROMPTING_H_
#define SHOTCAP_PROMPTING_H_

#include <cstddef>
#include <string>
#include <string_view>

#include "shotcap/dataset.h"

namespace shotcap::prompting {

// Train renderings carry the ground truth after the assistant cue; eval
// renderings stop at the cue.
enum class PromptMode { kTrain, kEval };

const char* PromptModeName(PromptMode mode);
PromptMode ParsePromptMode(std::string_view name);

inline constexpr std::size_t kDefaultMaxPromptTokens = 3072;

// Fixed scaffolding. Concatenated as
//   kPreamble " " kUserCue " " kVideoPlaceholder "\n" kInstruction
//   [" " kSpeechLead " " <asr>] " " kAssistantCue [" " <target>]
inline constexpr std::string_view kPreamble =
    "A chat between a curious user and an artificial intelligence assistant. "
    "The assistant gives helpful, detailed, and polite answers to the user's "
    "questions.";
inline constexpr std::string_view kUserCue = "USER:";
inline constexpr std::string_view kVideoPlaceholder = "<Video>";
inline constexpr std::string_view kInstruction =
    "Please describe this video. Do not include details that you are not sure "
    "of.";
inline constexpr std::string_view kSpeechLead =
    "This is what the speech in the video is saying:";
inline constexpr std::string_view kAssistantCue = "ASSISTANT:";

struct PromptInstance {
  std::string entry_id;
  PromptMode mode = PromptMode::kEval;
  std::string text;
  std::size_t token_count = 0;
  // Segments as currently rendered; EnforceBudget may shorten them.
  std::string asr;
  std::string target;
};

// Proxy tokenizer: whitespace-separated pieces.
std::size_t CountPromptTokens(std::string_view text);

PromptInstance RenderPrompt(const dataset::ShotEntry& entry, PromptMode mode);

// Shortens the ASR segment from its end, then (train mode only) the target,
// until the rendering fits `max_tokens`. Throws BudgetError when even the bare
// scaffolding does not fit.
PromptInstance EnforceBudget(const PromptInstance& instance,
                             std::size_t max_tokens);

// The human turn of `instance`: its eval-mode rendering with the same
// (possibly truncated) ASR.
std::string HumanTurn(const PromptInstance& instance);

// Number of tokens the scaffolding alone occupies in eval mode.
std::size_t ScaffoldTokenCount();

}  // namespace shotcap::prompting

#endif  // SHOTCAP_PROMPTING_H_
