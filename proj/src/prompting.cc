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

#include "shotcap/prompting.h"

#include <algorithm>
#include <vector>

#include "shotcap/error.h"
#include "shotcap/text.h"

namespace shotcap::prompting {
namespace {

std::string Render(std::string_view asr, PromptMode mode,
                   std::string_view target) {
  std::string text;
  text.reserve(kPreamble.size() + kInstruction.size() + asr.size() +
               target.size() + 96);
  text.append(kPreamble);
  text += ' ';
  text.append(kUserCue);
  text += ' ';
  text.append(kVideoPlaceholder);
  text += '\n';
  text.append(kInstruction);
  if (!IsBlank(asr)) {
    text += ' ';
    text.append(kSpeechLead);
    text += ' ';
    text.append(asr);
  }
  text += ' ';
  text.append(kAssistantCue);
  if (mode == PromptMode::kTrain) {
    text += ' ';
    text.append(target);
  }
  return text;
}

PromptInstance Make(std::string entry_id, PromptMode mode, std::string asr,
                    std::string target) {
  PromptInstance instance;
  instance.entry_id = std::move(entry_id);
  instance.mode = mode;
  instance.text = Render(asr, mode, target);
  instance.token_count = CountPromptTokens(instance.text);
  instance.asr = std::move(asr);
  instance.target = std::move(target);
  return instance;
}

}  // namespace

const char* PromptModeName(PromptMode mode) {
  return mode == PromptMode::kTrain ? "train" : "eval";
}

PromptMode ParsePromptMode(std::string_view name) {
  if (name == "train") return PromptMode::kTrain;
  if (name == "eval") return PromptMode::kEval;
  throw InvalidArgumentError("unknown prompt mode '" + std::string(name) +
                             "' (expected train or eval)");
}

std::size_t CountPromptTokens(std::string_view text) {
  return CountWhitespaceTokens(text);
}

std::size_t ScaffoldTokenCount() {
  static const std::size_t count =
      CountPromptTokens(Render("", PromptMode::kEval, ""));
  return count;
}

PromptInstance RenderPrompt(const dataset::ShotEntry& entry, PromptMode mode) {
  return Make(entry.entry_id, mode, entry.asr_text.value_or(""),
              mode == PromptMode::kTrain ? entry.target_text : "");
}

PromptInstance EnforceBudget(const PromptInstance& instance,
                             std::size_t max_tokens) {
  if (instance.token_count <= max_tokens) return instance;

  const std::size_t scaffold = ScaffoldTokenCount();
  const std::size_t lead = CountPromptTokens(kSpeechLead);
  const std::vector<std::string_view> asr = SplitWhitespace(instance.asr);
  const std::vector<std::string_view> target = SplitWhitespace(instance.target);
  const std::size_t target_tokens =
      instance.mode == PromptMode::kTrain ? target.size() : 0;

  if (scaffold > max_tokens) {
    throw BudgetError("prompt for '" + instance.entry_id + "' needs at least " +
                      std::to_string(scaffold) + " tokens, budget is " +
                      std::to_string(max_tokens));
  }

  // Longest ASR prefix that fits next to the full target.
  std::size_t keep_asr = 0;
  if (scaffold + lead + target_tokens < max_tokens) {
    keep_asr = std::min(asr.size(), max_tokens - scaffold - lead - target_tokens);
  }
  std::size_t keep_target = target_tokens;
  if (keep_asr == 0 && scaffold + target_tokens > max_tokens) {
    keep_target = max_tokens - scaffold;
  }

  PromptInstance trimmed =
      Make(instance.entry_id, instance.mode, JoinTokens(asr, keep_asr),
           instance.mode == PromptMode::kTrain ? JoinTokens(target, keep_target)
                                               : std::string());
  return trimmed;
}

std::string HumanTurn(const PromptInstance& instance) {
  return Render(instance.asr, PromptMode::kEval, "");
}

}  // namespace shotcap::prompting
