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

#ifndef SHOTCAP_DATASET_H_
#define SHOTCAP_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shotcap::dataset {

inline constexpr int kManifestSchemaVersion = 1;

// Tag that replaces the shot id in whole-video entry ids.
inline constexpr std::string_view kFullVideoTag = "FULL";

using FrameIndex = std::int64_t;

// Half-open frame range [start, end).
struct Span {
  FrameIndex start = 0;
  FrameIndex end = 0;

  FrameIndex length() const { return end - start; }
  bool empty() const { return end <= start; }
  bool operator==(const Span&) const = default;
};

struct ShotRecord {
  std::string shot_id;
  FrameIndex start_frame = 0;
  FrameIndex end_frame = 0;
  std::optional<std::string> caption;
  std::optional<std::string> asr;

  Span span() const { return {start_frame, end_frame}; }
  bool operator==(const ShotRecord&) const = default;
};

struct VideoRecord {
  std::string video_id;
  FrameIndex frame_count = 0;
  std::vector<ShotRecord> shots;
  std::optional<std::string> summary;
  std::optional<std::string> asr_full;
  std::optional<std::string> source_path;

  bool operator==(const VideoRecord&) const = default;
};

enum class Scope { kShot, kFullVideo };

const char* ScopeName(Scope scope);
// Accepts "shot" and "full_video"; throws ParseError otherwise.
Scope ParseScope(std::string_view name);

// One preprocessed unit: a captioned shot or a summarized whole video.
struct ShotEntry {
  std::string entry_id;
  Scope scope = Scope::kShot;
  Span span;
  std::string target_text;
  std::optional<std::string> asr_text;
  std::string video_id;

  bool operator==(const ShotEntry&) const = default;
};

std::string ShotEntryId(std::string_view video_id, std::string_view shot_id);
std::string FullVideoEntryId(std::string_view video_id);

// ---------------------------------------------------------------------------
// Manifest loading.

// A load-time invariant violation. `shot_id` is empty for video-level issues.
struct ManifestDiagnostic {
  std::string video_id;
  std::string shot_id;
  std::string reason;
  std::string detail;
};

// Diagnostic reasons emitted by LoadManifest.
namespace diag {
inline constexpr char kMalformedRecord[] = "malformed_record";
inline constexpr char kDuplicateVideoId[] = "duplicate_video_id";
inline constexpr char kNonPositiveFrameCount[] = "nonpositive_frame_count";
inline constexpr char kNegativeStart[] = "negative_start";
inline constexpr char kEmptySpan[] = "empty_span";
inline constexpr char kShotOutOfBounds[] = "shot_out_of_bounds";
inline constexpr char kDuplicateShotId[] = "duplicate_shot_id";
inline constexpr char kReservedShotId[] = "reserved_shot_id";
inline constexpr char kUnsortedShots[] = "unsorted_shots";
inline constexpr char kOverlappingShots[] = "overlapping_shots";
}  // namespace diag

// True for violations that FilterCorrupted cannot repair shot by shot
// (ordering, overlap, id clashes). Videos carrying one are excluded whole.
bool IsStructuralDiagnostic(std::string_view reason);

struct Manifest {
  int schema_version = kManifestSchemaVersion;
  // Every video that parsed, in document order, including flagged ones.
  // Unparseable records and repeated video ids appear only in diagnostics.
  std::vector<VideoRecord> videos;
  std::vector<ManifestDiagnostic> diagnostics;
};

Manifest ParseManifest(std::string_view text, std::string_view source);
Manifest LoadManifest(const std::filesystem::path& path);
std::string SerializeManifest(const std::vector<VideoRecord>& videos);

// ---------------------------------------------------------------------------
// Corruption filtering.

enum class RejectReason {
  kEmptySpan,
  kOutOfBounds,
  kMissingCaption,
  kCaptionTooShort,
  kNoFrames,
  kNoValidShots,
};

const char* RejectReasonName(RejectReason reason);

struct Rejection {
  std::string id;  // entry id for shots, video id for videos
  std::string video_id;
  std::string shot_id;  // empty for video rejections
  RejectReason reason = RejectReason::kEmptySpan;

  bool is_shot() const { return !shot_id.empty(); }
};

struct FilterOptions {
  // Captions with fewer whitespace-separated tokens are rejected.
  int min_caption_tokens = 1;
};

struct FilterResult {
  std::vector<VideoRecord> kept;
  std::vector<Rejection> rejected;
};

// Drops shots that are unusable for supervision and videos left without any
// usable shot. Each rejected item carries the first failing rule, checked in
// the order empty_span, out_of_bounds, missing_caption, caption_too_short.
FilterResult FilterCorrupted(const std::vector<VideoRecord>& records,
                             const FilterOptions& options = {});

// One shot-scope entry per captioned shot, then one full_video entry per video
// with a summary. Videos are ordered by video_id (stable), shots by start
// frame.
std::vector<ShotEntry> SegmentShots(const std::vector<VideoRecord>& records);

// ---------------------------------------------------------------------------
// Whole preprocessing pass: structural exclusion, filtering, segmentation.

struct RejectionLogEntry {
  std::string id;
  std::string video_id;
  std::string shot_id;
  std::string stage;  // "load" or "filter"
  std::string reason;
  std::string detail;
};

struct PreparedDataset {
  std::vector<VideoRecord> videos;
  std::vector<ShotEntry> entries;
  std::vector<RejectionLogEntry> log;
};

PreparedDataset PrepareDataset(const Manifest& manifest,
                               const FilterOptions& options = {});

std::string SerializeRejectionLog(const std::vector<RejectionLogEntry>& log);

}  // namespace shotcap::dataset

#endif  // SHOTCAP_DATASET_H_
