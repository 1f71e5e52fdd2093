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


#include "shotcap/harness.h"

#include <set>

#include "gtest/gtest.h"
#include "shotcap/error.h"
#include "test_util.h"

namespace shotcap::harness {
namespace {

using shotcap::testing::DataPath;
using shotcap::testing::ScratchDir;

RunManifest FixtureRun(const std::filesystem::path& out) {
  RunManifest m;
  m.dataset_path = DataPath("fixture_manifest.json");
  m.output_dir = out;
  return m;
}

std::set<std::string> Ids(const std::vector<metrics::Prediction>& predictions) {
  std::set<std::string> ids;
  for (const auto& p : predictions) ids.insert(p.entry_id);
  return ids;
}

TEST(HarnessTest, MockRunCoversEveryTaskEntry) {
  const auto out = ScratchDir();
  auto m = FixtureRun(out);
  const auto captions = GeneratePredictions(m);
  EXPECT_EQ(captions.predictions.size(), 24u);
  EXPECT_EQ(captions.failures, 0u);
  EXPECT_TRUE(std::filesystem::exists(captions.predictions_path));
  EXPECT_TRUE(std::filesystem::exists(captions.references_path));
  EXPECT_EQ(LoadPredictions(captions.predictions_path), captions.predictions);
  for (std::size_t i = 1; i < captions.predictions.size(); ++i) {
    EXPECT_LT(captions.predictions[i - 1].entry_id, captions.predictions[i].entry_id);
  }

  m.task = Task::kSummarization;
  m.output_dir = out / "summary";
  const auto summaries = GeneratePredictions(m);
  EXPECT_EQ(summaries.predictions.size(), 8u);
  for (const auto& p : summaries.predictions) {
    EXPECT_EQ(p.entry_id.substr(p.entry_id.find('#') + 1), "FULL");
  }
  const auto a = Ids(captions.predictions);
  for (const auto& id : Ids(summaries.predictions)) EXPECT_EQ(a.count(id), 0u) << id;
}

TEST(HarnessTest, ConcurrencyDoesNotChangeOutput) {
  const auto out = ScratchDir();
  auto m = FixtureRun(out / "one");
  m.backend.max_in_flight = 1;
  const auto one = GeneratePredictions(m);
  m.output_dir = out / "four";
  m.backend.max_in_flight = 4;
  const auto four = GeneratePredictions(m);
  EXPECT_EQ(ReadTextFile(one.predictions_path), ReadTextFile(four.predictions_path));
  EXPECT_EQ(ReadTextFile(one.references_path), ReadTextFile(four.references_path));
}

TEST(HarnessTest, SubprocessBackendSeesPrompts) {
  const auto out = ScratchDir();
  auto m = FixtureRun(out);
  m.backend.kind = BackendKind::kSubprocess;
  m.backend.endpoint = SHOTCAP_STUB_BACKEND;
  m.backend.max_in_flight = 3;
  const auto result = GeneratePredictions(m);
  ASSERT_EQ(result.predictions.size(), 24u);
  EXPECT_EQ(result.predictions[0].entry_id, "beach_06#s0");
  for (const auto& p : result.predictions) {
    if (p.entry_id == "cooking_01#s0") {
      EXPECT_EQ(p.text, "first we dice the onion nice and small");
    }
    if (p.entry_id == "cooking_01#s2") {
      EXPECT_EQ(p.text, "no speech");
    }
  }
}

TEST(HarnessTest, FailuresAreIsolated) {
  const auto out = ScratchDir();
  auto m = FixtureRun(out);
  m.backend.kind = BackendKind::kSubprocess;
  m.backend.endpoint = std::string(SHOTCAP_STUB_BACKEND) +
                       " --fail-on cooking_01#s1 --exit-on skate_02#s0";
  m.backend.max_in_flight = 2;
  const auto result = GeneratePredictions(m);
  ASSERT_EQ(result.predictions.size(), 24u);
  EXPECT_EQ(result.failures, 2u);
  for (const auto& p : result.predictions) {
    if (p.entry_id == "cooking_01#s1") {
      EXPECT_EQ(p.error, "stub_failure");
    } else if (p.entry_id == "skate_02#s0") {
      EXPECT_EQ(p.error, kBackendExited);
    } else {
      EXPECT_TRUE(p.error.empty()) << p.entry_id << ": " << p.error;
    }
  }
  const auto report = EvaluateRun(result.predictions_path, result.references_path, {});
  EXPECT_EQ(report.failures.size(), 2u);
  EXPECT_EQ(report.per_item.size(), 24u);
}

TEST(HarnessTest, FrameExtractionFailuresStayPerEntry) {
  const auto out = ScratchDir();
  Json manifest = Json::parse(ReadTextFile(DataPath("fixture_manifest.json")));
  manifest["videos"][0]["source_path"] = DataPath("videos/broken.mp4").string();
  manifest["videos"][1].erase("source_path");
  for (std::size_t i = 2; i < manifest["videos"].size(); ++i) {
    manifest["videos"][i]["source_path"] =
        DataPath(manifest["videos"][i]["source_path"].get<std::string>()).string();
  }
  WriteTextFile(out / "manifest.json", manifest.dump(2));

  RunManifest m;
  m.dataset_path = out / "manifest.json";
  m.output_dir = out / "run";
  m.sampling.n_frames = 4;
  m.frame_decoder = std::string(SHOTCAP_STUB_DECODER) + " {video} {frame_index} {out}";
  const auto result = GeneratePredictions(m);
  ASSERT_EQ(result.predictions.size(), 24u);
  EXPECT_EQ(result.failures, 6u);
  for (const auto& p : result.predictions) {
    if (p.entry_id.rfind("cooking_01#", 0) == 0) {
      EXPECT_EQ(p.error, sampling::kDecodeFailure);
    } else if (p.entry_id.rfind("skate_02#", 0) == 0) {
      EXPECT_EQ(p.error, "missing_source_path");
    } else {
      EXPECT_TRUE(p.error.empty()) << p.entry_id;
    }
  }
  EXPECT_FALSE(std::filesystem::is_empty(out / "run" / "frames"));
}

TEST(HarnessTest, RunManifestParsing) {
  const Json json = Json::parse(R"({
    "run_id": "r1", "task": "summarization", "dataset_path": "data/m.json",
    "output_dir": "out", "max_prompt_tokens": 2048,
    "sampling": {"method": "head_tail", "n_frames": 16, "seed": 7},
    "generation": {"temperature": 0.7, "top_p": 0.5, "max_new_tokens": 32},
    "backend": {"kind": "subprocess", "endpoint": "/bin/cat", "timeout_seconds": 5}
  })");
  const RunManifest m = RunManifestFromJson(json, "/base");
  EXPECT_EQ(m.run_id, "r1");
  EXPECT_EQ(m.task, Task::kSummarization);
  EXPECT_EQ(m.dataset_path, std::filesystem::path("/base/data/m.json"));
  EXPECT_EQ(m.output_dir, std::filesystem::path("/base/out"));
  EXPECT_EQ(m.max_prompt_tokens, 2048u);
  EXPECT_EQ(m.sampling.method, sampling::SamplingMethod::kHeadTail);
  EXPECT_EQ(m.sampling.n_frames, 16);
  EXPECT_EQ(m.sampling.seed, 7u);
  EXPECT_DOUBLE_EQ(m.generation.temperature, 0.7);
  EXPECT_EQ(m.generation.max_new_tokens, 32);
  EXPECT_EQ(m.generation.no_repeat_ngram_size, 3);
  EXPECT_EQ(m.backend.kind, BackendKind::kSubprocess);
  EXPECT_EQ(RunManifestFromJson(RunManifestToJson(m), "/elsewhere").dataset_path,
            m.dataset_path);

  EXPECT_THROW(RunManifestFromJson(Json::parse("{}"), "/"), Error);
  EXPECT_THROW(RunManifestFromJson(
                   Json::parse(R"({"dataset_path":"x","sampling":{"n_frames":0}})"), "/"),
               Error);
  EXPECT_THROW(RunManifestFromJson(
                   Json::parse(R"({"dataset_path":"x","generation":{"top_p":1.5}})"), "/"),
               Error);
}

TEST(HarnessTest, EvaluateIdentity) {
  EvaluateOptions options;
  options.model = "identity";
  const auto report = EvaluateRun(DataPath("identity_predictions.jsonl"),
                                  DataPath("identity_references.jsonl"), options);
  EXPECT_NEAR(report.bleu4, 100.0, 1e-9);
  EXPECT_GT(report.meteor, 99.0);
  EXPECT_LT(report.meteor, 100.0);
  EXPECT_NEAR(report.rouge_l, 100.0, 1e-9);
  EXPECT_EQ(report.metadata["items"], 4);
}

TEST(HarnessTest, EvaluateRejectsMissingPredictions) {
  const auto out = ScratchDir();
  const std::string text = ReadTextFile(DataPath("identity_predictions.jsonl"));
  WriteTextFile(out / "p.jsonl", text.substr(0, text.rfind("{\"entry_id\"")));
  EXPECT_THROW(EvaluateRun(out / "p.jsonl", DataPath("identity_references.jsonl"), {}),
               AlignmentError);
}

TEST(HarnessTest, DeadNetworkBackendFailsUpFront) {
  const auto out = ScratchDir();
  auto m = FixtureRun(out);
  m.backend.kind = BackendKind::kNetwork;
  m.backend.endpoint = "http://127.0.0.1:1/generate";
  m.backend.timeout_seconds = 1;
  EXPECT_THROW(GeneratePredictions(m), BackendError);
  EXPECT_FALSE(std::filesystem::exists(out / kPredictionsFile));
}

}  // namespace
}  // namespace shotcap::harness
