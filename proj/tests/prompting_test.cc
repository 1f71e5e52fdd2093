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

#include <string>

#include "gtest/gtest.h"
#include "shotcap/dataset.h"
#include "shotcap/error.h"
#include "shotcap/text.h"
#include "test_util.h"

namespace shotcap::prompting {
namespace {

using ::shotcap::testing::DataPath;
using ::shotcap::testing::ReadData;

const dataset::ShotEntry& FindEntry(const std::vector<dataset::ShotEntry>& entries,
                                    const std::string& id) {
  for (const auto& e : entries) {
    if (e.entry_id == id) return e;
  }
  throw std::runtime_error("no entry " + id);
}

std::vector<dataset::ShotEntry> FixtureEntries() {
  return dataset::PrepareDataset(dataset::LoadManifest(DataPath("fixture_manifest.json")))
      .entries;
}

dataset::ShotEntry Entry(std::string asr, std::string target) {
  dataset::ShotEntry e;
  e.entry_id = "v#a";
  e.span = {0, 10};
  if (!asr.empty()) e.asr_text = std::move(asr);
  e.target_text = std::move(target);
  return e;
}

std::string Words(int n, const std::string& stem = "w") {
  std::string out;
  for (int i = 0; i < n; ++i) out += (i ? " " : "") + stem + std::to_string(i);
  return out;
}

TEST(RenderPromptTest, GoldenFiles) {
  const auto entries = FixtureEntries();
  for (const std::string shot : {"s0", "s2"}) {
    const auto& entry = FindEntry(entries, "cooking_01#" + shot);
    EXPECT_EQ(RenderPrompt(entry, PromptMode::kEval).text,
              ReadData("golden/prompt_cooking_01_" + shot + "_eval.txt"));
    EXPECT_EQ(RenderPrompt(entry, PromptMode::kTrain).text,
              ReadData("golden/prompt_cooking_01_" + shot + "_train.txt"));
  }
}

TEST(RenderPromptTest, TemplateExample) {
  const auto train = RenderPrompt(Entry("hello", "a cat runs"), PromptMode::kTrain);
  const auto eval = RenderPrompt(Entry("hello", "a cat runs"), PromptMode::kEval);
  EXPECT_TRUE(train.text.ends_with(" This is what the speech in the video is saying: hello "
                                   "ASSISTANT: a cat runs"));
  EXPECT_EQ(eval.text, train.text.substr(0, train.text.size() - std::string(" a cat runs").size()));
  EXPECT_TRUE(eval.text.ends_with("ASSISTANT:"));
  EXPECT_EQ(eval.token_count, CountWhitespaceTokens(eval.text));
}

TEST(RenderPromptTest, MissingAsrOmitsSpeechSentence) {
  const auto eval = RenderPrompt(Entry("", "x"), PromptMode::kEval);
  EXPECT_EQ(eval.text.find("speech"), std::string::npos);
  EXPECT_EQ(eval.token_count, ScaffoldTokenCount());
  auto blank = Entry("", "x");
  blank.asr_text = "   ";
  EXPECT_EQ(RenderPrompt(blank, PromptMode::kEval).text, eval.text);
}

TEST(RenderPromptTest, EvalIsStrictPrefixOfTrain) {
  for (const auto& entry : FixtureEntries()) {
    const auto eval = RenderPrompt(entry, PromptMode::kEval).text;
    const auto train = RenderPrompt(entry, PromptMode::kTrain).text;
    EXPECT_LT(eval.size(), train.size()) << entry.entry_id;
    EXPECT_TRUE(train.starts_with(eval)) << entry.entry_id;
  }
}

TEST(RenderPromptTest, TemplatePieces) {
  const auto text = RenderPrompt(Entry("", "x"), PromptMode::kEval).text;
  EXPECT_TRUE(text.starts_with(std::string(kPreamble) + " USER: <Video>\n"));
  EXPECT_NE(text.find(kInstruction), std::string::npos);
  EXPECT_EQ(ParsePromptMode("train"), PromptMode::kTrain);
  EXPECT_STREQ(PromptModeName(PromptMode::kEval), "eval");
}

TEST(EnforceBudgetTest, UnderBudgetIsUnchanged) {
  const auto p = RenderPrompt(Entry(Words(30), Words(30, "t")), PromptMode::kTrain);
  ASSERT_EQ(p.token_count, ScaffoldTokenCount() + 10 + 30 + 30);
  const auto q = EnforceBudget(p, 3072);
  EXPECT_EQ(q.text, p.text);
  EXPECT_EQ(q.token_count, p.token_count);
}

TEST(EnforceBudgetTest, AsrShortenedByExactlyTheOverflow) {
  const auto p = RenderPrompt(Entry(Words(200), "a b c"), PromptMode::kEval);
  const std::size_t budget = p.token_count - 10;
  const auto q = EnforceBudget(p, budget);
  EXPECT_EQ(q.token_count, budget);
  EXPECT_EQ(CountWhitespaceTokens(q.asr), 190u);
  EXPECT_EQ(q.asr, Words(190));
  EXPECT_TRUE(q.text.starts_with(std::string(kPreamble)));
  EXPECT_TRUE(q.text.ends_with(" ASSISTANT:"));
}

TEST(EnforceBudgetTest, TargetTruncatedOnlyAfterAsrIsGone) {
  const auto p = RenderPrompt(Entry(Words(20), Words(100, "t")), PromptMode::kTrain);
  const std::size_t budget = ScaffoldTokenCount() + 1 + 50;
  const auto q = EnforceBudget(p, budget);
  EXPECT_LE(q.token_count, budget);
  EXPECT_TRUE(q.asr.empty());
  EXPECT_EQ(q.text.find("speech"), std::string::npos);
  EXPECT_EQ(q.target, Words(51, "t"));
  EXPECT_EQ(q.token_count, budget);
}

TEST(EnforceBudgetTest, UnattainableBudget) {
  const auto p = RenderPrompt(Entry("", "x"), PromptMode::kEval);
  EXPECT_THROW(EnforceBudget(p, 8), BudgetError);
}

TEST(EnforceBudgetTest, BudgetHoldsOnRandomSizes) {
  for (int asr = 0; asr < 60; asr += 7) {
    for (int target = 1; target < 60; target += 9) {
      for (std::size_t budget = ScaffoldTokenCount() + 1; budget < 160; budget += 13) {
        const auto p = RenderPrompt(Entry(Words(asr), Words(target, "t")), PromptMode::kTrain);
        const auto q = EnforceBudget(p, budget);
        EXPECT_LE(q.token_count, budget);
        EXPECT_EQ(q.token_count, CountWhitespaceTokens(q.text));
        EXPECT_NE(q.text.find(kInstruction), std::string::npos);
        EXPECT_NE(q.text.find(kAssistantCue), std::string::npos);
      }
    }
  }
}

}  // namespace
}  // namespace shotcap::prompting
