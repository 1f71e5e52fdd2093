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
#include <set>
#include <string>
#include <unordered_set>

#include "shotcap/error.h"
#include "shotcap/json_lines.h"
#include "shotcap/text.h"

namespace shotcap::dataset {
namespace {

ShotRecord ParseShot(const Json& value, const std::string& context) {
  if (!value.is_object()) throw ParseError(context + " is not an object", 0, 0);
  ShotRecord shot;
  shot.shot_id = RequireString(value, "shot_id", context);
  shot.start_frame = RequireInteger(value, "start_frame", context);
  shot.end_frame = RequireInteger(value, "end_frame", context);
  std::string text;
  if (OptionalString(value, "caption", context, &text)) shot.caption = text;
  if (OptionalString(value, "asr", context, &text)) shot.asr = text;
  return shot;
}

VideoRecord ParseVideo(const Json& value, const std::string& context) {
  if (!value.is_object()) throw ParseError(context + " is not an object", 0, 0);
  VideoRecord video;
  video.video_id = RequireString(value, "video_id", context);
  video.frame_count = RequireInteger(value, "frame_count", context);
  std::string text;
  if (OptionalString(value, "summary", context, &text)) video.summary = text;
  if (OptionalString(value, "asr_full", context, &text)) video.asr_full = text;
  if (OptionalString(value, "source_path", context, &text)) {
    video.source_path = text;
  }
  auto shots = value.find("shots");
  if (shots == value.end() || !shots->is_array()) {
    throw ParseError("missing or non-array field 'shots' in " + context, 0, 0);
  }
  for (std::size_t i = 0; i < shots->size(); ++i) {
    video.shots.push_back(ParseShot(
        (*shots)[i], context + ".shots[" + std::to_string(i) + "]"));
  }
  return video;
}

void CheckVideo(const VideoRecord& video,
                std::vector<ManifestDiagnostic>* diagnostics) {
  auto flag = [&](const std::string& shot_id, const char* reason,
                  std::string detail) {
    diagnostics->push_back({video.video_id, shot_id, reason, std::move(detail)});
  };
  if (video.frame_count <= 0) {
    flag("", diag::kNonPositiveFrameCount,
         "frame_count=" + std::to_string(video.frame_count));
  }
  std::set<std::string> seen;
  const ShotRecord* previous = nullptr;
  const ShotRecord* previous_nonempty = nullptr;
  bool unsorted_reported = false;
  for (const ShotRecord& shot : video.shots) {
    const std::string span = "[" + std::to_string(shot.start_frame) + ", " +
                             std::to_string(shot.end_frame) + ")";
    if (shot.shot_id == kFullVideoTag) {
      flag(shot.shot_id, diag::kReservedShotId, "shot id collides with the "
                                                "whole-video entry tag");
    }
    if (!seen.insert(shot.shot_id).second) {
      flag(shot.shot_id, diag::kDuplicateShotId, "");
    }
    if (shot.start_frame < 0) flag(shot.shot_id, diag::kNegativeStart, span);
    if (shot.end_frame <= shot.start_frame) {
      flag(shot.shot_id, diag::kEmptySpan, span);
    }
    if (shot.end_frame > video.frame_count) {
      flag(shot.shot_id, diag::kShotOutOfBounds,
           span + " exceeds frame_count=" + std::to_string(video.frame_count));
    }
    if (previous != nullptr && shot.start_frame < previous->start_frame &&
        !unsorted_reported) {
      flag(shot.shot_id, diag::kUnsortedShots,
           "starts before shot '" + previous->shot_id + "'");
      unsorted_reported = true;
    }
    if (shot.end_frame > shot.start_frame) {
      if (previous_nonempty != nullptr &&
          shot.start_frame < previous_nonempty->end_frame &&
          shot.start_frame >= previous_nonempty->start_frame) {
        flag(shot.shot_id, diag::kOverlappingShots,
             "overlaps shot '" + previous_nonempty->shot_id + "'");
      }
      previous_nonempty = &shot;
    }
    previous = &shot;
  }
}

std::optional<RejectReason> ShotRejectReason(const ShotRecord& shot,
                                             FrameIndex frame_count,
                                             const FilterOptions& options) {
  if (shot.end_frame <= shot.start_frame) return RejectReason::kEmptySpan;
  if (shot.start_frame < 0 || shot.end_frame > frame_count) {
    return RejectReason::kOutOfBounds;
  }
  if (!shot.caption.has_value() || IsBlank(*shot.caption)) {
    return RejectReason::kMissingCaption;
  }
  if (CountWhitespaceTokens(*shot.caption) <
      static_cast<std::size_t>(std::max(options.min_caption_tokens, 0))) {
    return RejectReason::kCaptionTooShort;
  }
  return std::nullopt;
}

Json OptionalToJson(const std::optional<std::string>& value) {
  return value.has_value() ? Json(*value) : Json(nullptr);
}

}  // namespace

const char* ScopeName(Scope scope) {
  return scope == Scope::kShot ? "shot" : "full_video";
}

Scope ParseScope(std::string_view name) {
  if (name == "shot") return Scope::kShot;
  if (name == "full_video") return Scope::kFullVideo;
  throw ParseError("unknown scope '" + std::string(name) + "'", 0, 0);
}

std::string ShotEntryId(std::string_view video_id, std::string_view shot_id) {
  std::string id(video_id);
  id += '#';
  id.append(shot_id);
  return id;
}

std::string FullVideoEntryId(std::string_view video_id) {
  return ShotEntryId(video_id, kFullVideoTag);
}

bool IsStructuralDiagnostic(std::string_view reason) {
  return reason == diag::kUnsortedShots || reason == diag::kOverlappingShots ||
         reason == diag::kDuplicateShotId || reason == diag::kReservedShotId;
}

Manifest ParseManifest(std::string_view text, std::string_view source) {
  const Json doc = ParseJsonDocument(text, source);
  const std::string where = "manifest '" + std::string(source) + "'";
  if (!doc.is_object()) throw ParseError(where + " is not an object", 1, 1);

  Manifest manifest;
  manifest.schema_version =
      static_cast<int>(RequireInteger(doc, "schema_version", where));
  if (manifest.schema_version != kManifestSchemaVersion) {
    throw ParseError(where + " has unsupported schema_version " +
                         std::to_string(manifest.schema_version),
                     0, 0);
  }
  auto videos = doc.find("videos");
  if (videos == doc.end() || !videos->is_array()) {
    throw ParseError("missing or non-array field 'videos' in " + where, 0, 0);
  }

  std::unordered_set<std::string> video_ids;
  for (std::size_t i = 0; i < videos->size(); ++i) {
    const Json& value = (*videos)[i];
    const std::string context = "videos[" + std::to_string(i) + "]";
    VideoRecord video;
    try {
      video = ParseVideo(value, context);
    } catch (const ParseError& e) {
      std::string id = context;
      if (value.is_object()) {
        auto it = value.find("video_id");
        if (it != value.end() && it->is_string()) id = it->get<std::string>();
      }
      manifest.diagnostics.push_back({id, "", diag::kMalformedRecord, e.what()});
      continue;
    }
    if (!video_ids.insert(video.video_id).second) {
      manifest.diagnostics.push_back(
          {video.video_id, "", diag::kDuplicateVideoId, context});
      continue;
    }
    CheckVideo(video, &manifest.diagnostics);
    manifest.videos.push_back(std::move(video));
  }
  return manifest;
}

Manifest LoadManifest(const std::filesystem::path& path) {
  return ParseManifest(ReadTextFile(path), path.string());
}

std::string SerializeManifest(const std::vector<VideoRecord>& videos) {
  Json doc;
  doc["schema_version"] = kManifestSchemaVersion;
  Json array = Json::array();
  for (const VideoRecord& video : videos) {
    Json v;
    v["video_id"] = video.video_id;
    v["frame_count"] = video.frame_count;
    if (video.source_path) v["source_path"] = *video.source_path;
    v["summary"] = OptionalToJson(video.summary);
    v["asr_full"] = OptionalToJson(video.asr_full);
    Json shots = Json::array();
    for (const ShotRecord& shot : video.shots) {
      Json s;
      s["shot_id"] = shot.shot_id;
      s["start_frame"] = shot.start_frame;
      s["end_frame"] = shot.end_frame;
      s["caption"] = OptionalToJson(shot.caption);
      s["asr"] = OptionalToJson(shot.asr);
      shots.push_back(std::move(s));
    }
    v["shots"] = std::move(shots);
    array.push_back(std::move(v));
  }
  doc["videos"] = std::move(array);
  return doc.dump(2) + "\n";
}

const char* RejectReasonName(RejectReason reason) {
  switch (reason) {
    case RejectReason::kEmptySpan:
      return "empty_span";
    case RejectReason::kOutOfBounds:
      return "out_of_bounds";
    case RejectReason::kMissingCaption:
      return "missing_caption";
    case RejectReason::kCaptionTooShort:
      return "caption_too_short";
    case RejectReason::kNoFrames:
      return "no_frames";
    case RejectReason::kNoValidShots:
      return "no_valid_shots";
  }
  return "unknown";
}

FilterResult FilterCorrupted(const std::vector<VideoRecord>& records,
                             const FilterOptions& options) {
  FilterResult result;
  for (const VideoRecord& video : records) {
    VideoRecord kept = video;
    kept.shots.clear();
    for (const ShotRecord& shot : video.shots) {
      if (auto reason = ShotRejectReason(shot, video.frame_count, options)) {
        result.rejected.push_back({ShotEntryId(video.video_id, shot.shot_id),
                                   video.video_id, shot.shot_id, *reason});
      } else {
        kept.shots.push_back(shot);
      }
    }
    if (video.frame_count <= 0) {
      result.rejected.push_back(
          {video.video_id, video.video_id, "", RejectReason::kNoFrames});
    } else if (kept.shots.empty()) {
      result.rejected.push_back(
          {video.video_id, video.video_id, "", RejectReason::kNoValidShots});
    } else {
      result.kept.push_back(std::move(kept));
    }
  }
  return result;
}

std::vector<ShotEntry> SegmentShots(const std::vector<VideoRecord>& records) {
  std::vector<const VideoRecord*> videos;
  videos.reserve(records.size());
  for (const VideoRecord& video : records) videos.push_back(&video);
  std::stable_sort(videos.begin(), videos.end(),
                   [](const VideoRecord* a, const VideoRecord* b) {
                     return a->video_id < b->video_id;
                   });

  std::vector<ShotEntry> entries;
  for (const VideoRecord* video : videos) {
    std::vector<const ShotRecord*> shots;
    for (const ShotRecord& shot : video->shots) shots.push_back(&shot);
    std::stable_sort(shots.begin(), shots.end(),
                     [](const ShotRecord* a, const ShotRecord* b) {
                       return a->start_frame < b->start_frame;
                     });
    for (const ShotRecord* shot : shots) {
      if (!shot->caption.has_value() || IsBlank(*shot->caption)) continue;
      entries.push_back({ShotEntryId(video->video_id, shot->shot_id),
                         Scope::kShot, shot->span(), *shot->caption, shot->asr,
                         video->video_id});
    }
    if (video->summary.has_value() && !IsBlank(*video->summary)) {
      entries.push_back({FullVideoEntryId(video->video_id), Scope::kFullVideo,
                         Span{0, video->frame_count}, *video->summary,
                         video->asr_full, video->video_id});
    }
  }
  return entries;
}

PreparedDataset PrepareDataset(const Manifest& manifest,
                               const FilterOptions& options) {
  PreparedDataset prepared;
  std::set<std::string> excluded;
  for (const ManifestDiagnostic& d : manifest.diagnostics) {
    const bool dropped_at_load = d.reason == diag::kMalformedRecord ||
                                 d.reason == diag::kDuplicateVideoId;
    if (IsStructuralDiagnostic(d.reason)) excluded.insert(d.video_id);
    // Span and frame-count findings resurface as filter rejections, so only
    // the ones that exclude a record are logged here.
    if (dropped_at_load || IsStructuralDiagnostic(d.reason)) {
      std::string id = d.shot_id.empty() ? d.video_id
                                         : ShotEntryId(d.video_id, d.shot_id);
      prepared.log.push_back(
          {std::move(id), d.video_id, d.shot_id, "load", d.reason, d.detail});
    }
  }

  std::vector<VideoRecord> candidates;
  for (const VideoRecord& video : manifest.videos) {
    if (!excluded.contains(video.video_id)) candidates.push_back(video);
  }
  FilterResult filtered = FilterCorrupted(candidates, options);
  for (const Rejection& r : filtered.rejected) {
    prepared.log.push_back({r.id, r.video_id, r.shot_id, "filter",
                            RejectReasonName(r.reason), ""});
  }
  prepared.entries = SegmentShots(filtered.kept);
  prepared.videos = std::move(filtered.kept);
  return prepared;
}

std::string SerializeRejectionLog(const std::vector<RejectionLogEntry>& log) {
  std::string out;
  for (const RejectionLogEntry& e : log) {
    Json line;
    line["id"] = e.id;
    line["video_id"] = e.video_id;
    if (!e.shot_id.empty()) line["shot_id"] = e.shot_id;
    line["stage"] = e.stage;
    line["reason"] = e.reason;
    if (!e.detail.empty()) line["detail"] = e.detail;
    out += ToJsonLine(line);
  }
  return out;
}

}  // namespace shotcap::dataset
