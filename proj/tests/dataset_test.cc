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


#include "shotcap/dataset.h"

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "gtest/gtest.h"
#include "shotcap/error.h"
#include "shotcap/sft_dataset.h"
#include "test_util.h"

namespace shotcap::dataset {
namespace {

using ::shotcap::testing::DataPath;
using ::shotcap::testing::ScratchDir;

ShotRecord Shot(std::string id, FrameIndex start, FrameIndex end,
                std::optional<std::string> caption = "a caption",
                std::optional<std::string> asr = std::nullopt) {
  ShotRecord s;
  s.shot_id = std::move(id);
  s.start_frame = start;
  s.end_frame = end;
  s.caption = std::move(caption);
  s.asr = std::move(asr);
  return s;
}

VideoRecord Video(std::string id, FrameIndex frames, std::vector<ShotRecord> shots,
                  std::optional<std::string> summary = std::nullopt) {
  VideoRecord v;
  v.video_id = std::move(id);
  v.frame_count = frames;
  v.shots = std::move(shots);
  v.summary = std::move(summary);
  return v;
}

std::set<std::string> Reasons(const Manifest& m, const std::string& video_id) {
  std::set<std::string> out;
  for (const auto& d : m.diagnostics) {
    if (d.video_id == video_id) out.insert(d.reason);
  }
  return out;
}

TEST(ManifestTest, LoadsFixture) {
  const Manifest m = LoadManifest(DataPath("fixture_manifest.json"));
  EXPECT_TRUE(m.diagnostics.empty());
  ASSERT_EQ(m.videos.size(), 8u);
  std::size_t shots = 0;
  for (const auto& v : m.videos) shots += v.shots.size();
  EXPECT_EQ(shots, 24u);
  EXPECT_EQ(m.videos[0].video_id, "cooking_01");
  EXPECT_EQ(m.videos[0].shots[0].asr, "first we dice the onion nice and small");
  EXPECT_FALSE(m.videos[0].shots[2].asr.has_value());
}

TEST(ManifestTest, TwoVideosFiveShots) {
  const Manifest m = ParseManifest(R"({"schema_version": 1, "videos": [
    {"video_id": "v1", "frame_count": 100, "shots": [
      {"shot_id": "a", "start_frame": 0, "end_frame": 50, "caption": "x"},
      {"shot_id": "b", "start_frame": 50, "end_frame": 100, "caption": "y"}]},
    {"video_id": "v2", "frame_count": 90, "shots": [
      {"shot_id": "a", "start_frame": 0, "end_frame": 30},
      {"shot_id": "b", "start_frame": 30, "end_frame": 60},
      {"shot_id": "c", "start_frame": 60, "end_frame": 90}]}]})",
                                   "inline");
  ASSERT_EQ(m.videos.size(), 2u);
  EXPECT_EQ(m.videos[0].shots.size() + m.videos[1].shots.size(), 5u);
}

TEST(ManifestTest, EmptyDocumentIsValid) {
  const Manifest m = ParseManifest(R"({"schema_version": 1, "videos": []})", "inline");
  EXPECT_TRUE(m.videos.empty());
  EXPECT_TRUE(m.diagnostics.empty());
}

TEST(ManifestTest, FlagsOutOfBoundsShot) {
  const Manifest m = ParseManifest(R"({"schema_version": 1, "videos": [
    {"video_id": "v", "frame_count": 10, "shots": [
      {"shot_id": "a", "start_frame": 0, "end_frame": 12, "caption": "x"}]}]})",
                                   "inline");
  ASSERT_EQ(m.videos.size(), 1u);
  EXPECT_EQ(Reasons(m, "v"), std::set<std::string>{diag::kShotOutOfBounds});
}

TEST(ManifestTest, FlagsStructuralProblems) {
  const Manifest m = ParseManifest(R"({"schema_version": 1, "videos": [
    {"video_id": "unsorted", "frame_count": 10, "shots": [
      {"shot_id": "b", "start_frame": 5, "end_frame": 8},
      {"shot_id": "a", "start_frame": 0, "end_frame": 4}]},
    {"video_id": "overlap", "frame_count": 10, "shots": [
      {"shot_id": "a", "start_frame": 0, "end_frame": 6},
      {"shot_id": "b", "start_frame": 5, "end_frame": 8}]},
    {"video_id": "dupe", "frame_count": 10, "shots": [
      {"shot_id": "a", "start_frame": 0, "end_frame": 4},
      {"shot_id": "a", "start_frame": 4, "end_frame": 8}]},
    {"video_id": "reserved", "frame_count": 10, "shots": [
      {"shot_id": "FULL", "start_frame": 0, "end_frame": 4}]},
    {"video_id": "dupe", "frame_count": 10, "shots": []},
    {"video_id": 7}]})",
                                   "inline");
  EXPECT_EQ(m.videos.size(), 4u);
  EXPECT_TRUE(Reasons(m, "unsorted").count(diag::kUnsortedShots));
  EXPECT_TRUE(Reasons(m, "overlap").count(diag::kOverlappingShots));
  EXPECT_TRUE(Reasons(m, "dupe").count(diag::kDuplicateShotId));
  EXPECT_TRUE(Reasons(m, "dupe").count(diag::kDuplicateVideoId));
  EXPECT_TRUE(Reasons(m, "reserved").count(diag::kReservedShotId));
  const bool malformed = std::any_of(m.diagnostics.begin(), m.diagnostics.end(),
                                     [](const auto& d) { return d.reason == diag::kMalformedRecord; });
  EXPECT_TRUE(malformed);
}

TEST(ManifestTest, TopLevelErrors) {
  EXPECT_THROW(ParseManifest("{\"schema_version\": 2, \"videos\": []}", "x"), ParseError);
  EXPECT_THROW(ParseManifest("{\"schema_version\": 1}", "x"), ParseError);
  EXPECT_THROW(ParseManifest("{\"schema_version\": 1, \"videos\": [", "x"), ParseError);
  EXPECT_THROW(LoadManifest(DataPath("does_not_exist.json")), IoError);
}

TEST(ManifestTest, SerializeRoundTrips) {
  const Manifest m = LoadManifest(DataPath("fixture_manifest.json"));
  const Manifest again = ParseManifest(SerializeManifest(m.videos), "again");
  EXPECT_EQ(again.videos, m.videos);
}

TEST(FilterTest, ShotRules) {
  const auto result = FilterCorrupted({Video(
      "v", 100,
      {Shot("empty", 10, 10), Shot("oob", 90, 120), Shot("nocap", 0, 5, std::nullopt),
       Shot("blank", 5, 8, "   "), Shot("ok", 20, 30)})});
  ASSERT_EQ(result.kept.size(), 1u);
  ASSERT_EQ(result.kept[0].shots.size(), 1u);
  EXPECT_EQ(result.kept[0].shots[0].shot_id, "ok");
  ASSERT_EQ(result.rejected.size(), 4u);
  EXPECT_EQ(result.rejected[0].reason, RejectReason::kEmptySpan);
  EXPECT_EQ(result.rejected[1].reason, RejectReason::kOutOfBounds);
  EXPECT_EQ(result.rejected[2].reason, RejectReason::kMissingCaption);
  EXPECT_EQ(result.rejected[3].reason, RejectReason::kMissingCaption);
  EXPECT_EQ(result.rejected[0].id, "v#empty");
}

TEST(FilterTest, CaptionLengthAndVideoRules) {
  FilterOptions options;
  options.min_caption_tokens = 3;
  const auto result = FilterCorrupted(
      {Video("short", 50, {Shot("a", 0, 10, "two words")}),
       Video("noframes", 0, {}),
       Video("fine", 50, {Shot("a", 0, 10, "three words here")})},
      options);
  ASSERT_EQ(result.kept.size(), 1u);
  EXPECT_EQ(result.kept[0].video_id, "fine");
  std::vector<std::string> reasons;
  for (const auto& r : result.rejected) reasons.push_back(RejectReasonName(r.reason));
  EXPECT_EQ(reasons, (std::vector<std::string>{"caption_too_short", "no_valid_shots",
                                               "no_frames"}));
  EXPECT_FALSE(result.rejected[1].is_shot());
}

TEST(FilterTest, PartitionAndIdempotenceOnRandomManifests) {
  std::mt19937 rng(1234);
  for (int round = 0; round < 200; ++round) {
    std::vector<VideoRecord> videos;
    std::size_t total_shots = 0;
    const int n_videos = 1 + rng() % 4;
    for (int v = 0; v < n_videos; ++v) {
      const FrameIndex frames = static_cast<FrameIndex>(rng() % 60) - 5;
      std::vector<ShotRecord> shots;
      const int n_shots = rng() % 5;
      for (int s = 0; s < n_shots; ++s) {
        const FrameIndex start = rng() % 70;
        const FrameIndex end = start + static_cast<FrameIndex>(rng() % 20) - 3;
        std::optional<std::string> caption;
        switch (rng() % 4) {
          case 0: break;
          case 1: caption = ""; break;
          default: caption = "words " + std::to_string(s); break;
        }
        shots.push_back(Shot("s" + std::to_string(s), start, end, caption));
      }
      total_shots += shots.size();
      videos.push_back(Video("v" + std::to_string(v), frames, std::move(shots)));
    }
    const FilterResult result = FilterCorrupted(videos);
    std::size_t kept = 0, rejected_shots = 0;
    for (const auto& v : result.kept) kept += v.shots.size();
    for (const auto& r : result.rejected) rejected_shots += r.is_shot();
    // Shots of a video rejected whole are not listed one by one.
    std::size_t dropped_with_video = 0;
    for (const auto& r : result.rejected) {
      if (r.is_shot()) continue;
      for (const auto& v : videos) {
        if (v.video_id != r.video_id) continue;
        std::size_t listed = 0;
        for (const auto& s : result.rejected) listed += s.is_shot() && s.video_id == v.video_id;
        dropped_with_video += v.shots.size() - listed;
      }
    }
    EXPECT_EQ(kept + rejected_shots + dropped_with_video, total_shots);
    EXPECT_TRUE(FilterCorrupted(result.kept).rejected.empty());
  }
}

TEST(SegmentTest, CountsAndOrder) {
  const auto entries = SegmentShots(
      {Video("b", 100, {Shot("x", 50, 100), Shot("y", 0, 50)}),
       Video("a", 90, {Shot("p", 0, 30), Shot("q", 30, 60), Shot("r", 60, 90)},
             "a summary")});
  std::vector<std::string> ids;
  for (const auto& e : entries) ids.push_back(e.entry_id);
  EXPECT_EQ(ids, (std::vector<std::string>{"a#p", "a#q", "a#r", "a#FULL", "b#y", "b#x"}));
  EXPECT_EQ(entries[3].scope, Scope::kFullVideo);
  EXPECT_EQ(entries[3].span, (Span{0, 90}));
  EXPECT_EQ(entries[3].target_text, "a summary");
}

TEST(SegmentTest, UncaptionedShotsAreSkipped) {
  const auto entries =
      SegmentShots({Video("v", 10, {Shot("a", 0, 5, std::nullopt), Shot("b", 5, 10)})});
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].entry_id, "v#b");
}

TEST(PrepareTest, FixtureYields32Entries) {
  const auto prepared = PrepareDataset(LoadManifest(DataPath("fixture_manifest.json")));
  EXPECT_EQ(prepared.entries.size(), 32u);
  EXPECT_TRUE(prepared.log.empty());
  const auto n_full = std::count_if(prepared.entries.begin(), prepared.entries.end(),
                                    [](const auto& e) { return e.scope == Scope::kFullVideo; });
  EXPECT_EQ(n_full, 8);
}

TEST(PrepareTest, EmptySpanShotIsLogged) {
  const auto prepared = PrepareDataset(LoadManifest(DataPath("empty_span_manifest.json")));
  const auto hit = std::find_if(prepared.log.begin(), prepared.log.end(),
                                [](const auto& r) { return r.id == "clip_a#s1"; });
  ASSERT_NE(hit, prepared.log.end());
  EXPECT_EQ(hit->reason, "empty_span");
  EXPECT_NE(SerializeRejectionLog(prepared.log).find("\"empty_span\""), std::string::npos);
  // Two surviving shots, one summary, and clip_b's single shot.
  EXPECT_EQ(prepared.entries.size(), 4u);
}

TEST(PrepareTest, StructuralViolationsExcludeTheVideo) {
  const Manifest m = ParseManifest(R"({"schema_version": 1, "videos": [
    {"video_id": "bad", "frame_count": 10, "summary": "s", "shots": [
      {"shot_id": "a", "start_frame": 0, "end_frame": 6, "caption": "x"},
      {"shot_id": "b", "start_frame": 5, "end_frame": 8, "caption": "y"}]},
    {"video_id": "good", "frame_count": 10, "shots": [
      {"shot_id": "a", "start_frame": 0, "end_frame": 6, "caption": "x"}]}]})",
                                   "inline");
  const auto prepared = PrepareDataset(m);
  ASSERT_EQ(prepared.entries.size(), 1u);
  EXPECT_EQ(prepared.entries[0].entry_id, "good#a");
  ASSERT_FALSE(prepared.log.empty());
  EXPECT_EQ(prepared.log[0].stage, "load");
}

TEST(SftDatasetTest, TrainAndEvalFiles) {
  const auto dir = ScratchDir();
  auto entries = PrepareDataset(LoadManifest(DataPath("fixture_manifest.json"))).entries;
  entries.resize(4);
  EXPECT_EQ(WriteSftDataset(entries, prompting::PromptMode::kTrain, dir / "train.jsonl"), 4u);
  const auto train = ReadJsonLines(dir / "train.jsonl");
  ASSERT_EQ(train.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(train[i]["target"], entries[i].target_text);
  }

  EXPECT_EQ(WriteSftDataset(entries, prompting::PromptMode::kEval, dir / "eval.jsonl"), 4u);
  for (const auto& line : ReadJsonLines(dir / "eval.jsonl")) {
    EXPECT_FALSE(line.contains("target"));
  }
  const auto refs = LoadReferences(DefaultReferencesPath(dir / "eval.jsonl"));
  ASSERT_EQ(refs.size(), 4u);
  EXPECT_EQ(refs[2].references, std::vector<std::string>{entries[2].target_text});

  // Round trip through the eval file plus references.
  EXPECT_EQ(LoadSftDataset(dir / "eval.jsonl", &refs), entries);
  EXPECT_EQ(LoadSftDataset(dir / "train.jsonl"), entries);
}

TEST(SftDatasetTest, EmptyAndDeterministic) {
  const auto dir = ScratchDir();
  EXPECT_EQ(WriteSftDataset({}, prompting::PromptMode::kTrain, dir / "empty.jsonl"), 0u);
  EXPECT_EQ(ReadTextFile(dir / "empty.jsonl"), "");
  const auto entries = PrepareDataset(LoadManifest(DataPath("fixture_manifest.json"))).entries;
  EXPECT_EQ(RenderSftLines(entries, prompting::PromptMode::kTrain, 3072),
            RenderSftLines(entries, prompting::PromptMode::kTrain, 3072));
}

}  // namespace
}  // namespace shotcap::dataset
