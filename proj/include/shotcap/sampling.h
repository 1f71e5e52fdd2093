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

#ifndef SHOTCAP_SAMPLING_H_
#define SHOTCAP_SAMPLING_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "shotcap/dataset.h"
#include "shotcap/json_lines.h"

namespace shotcap::sampling {

using dataset::FrameIndex;

enum class SamplingMethod { kUniform, kHeadTail };

const char* SamplingMethodName(SamplingMethod method);
// Accepts "uniform" and "head_tail"; throws InvalidArgumentError otherwise.
SamplingMethod ParseSamplingMethod(std::string_view name);

inline constexpr int kDefaultFrames = 120;
inline constexpr std::uint64_t kDefaultSeed = 0;

// Frame indices chosen for one entry. `indices` always has exactly `n_frames`
// elements, sorted, each inside `span`; short spans repeat frames.
struct FramePlan {
  std::string entry_id;
  dataset::Scope scope = dataset::Scope::kShot;
  SamplingMethod method = SamplingMethod::kUniform;
  int n_frames = 0;
  std::vector<FrameIndex> indices;
  std::uint64_t seed = 0;  // only meaningful for head_tail
  dataset::Span span;
};

// Centered even spacing: index_k = start + floor((k + 0.5) * len / n).
FramePlan UniformPlan(FrameIndex start, FrameIndex end, int n);

// ceil(n/2) frames from [start, mid) and floor(n/2) from [mid, end), where
// mid = start + floor(len/2). Each half is sampled without replacement when it
// has enough frames and with replacement otherwise. A span of one frame has an
// empty head, so every draw comes from the tail.
FramePlan HeadTailPlan(FrameIndex start, FrameIndex end, int n,
                       std::uint64_t seed);

FramePlan PlanForEntry(const dataset::ShotEntry& entry, SamplingMethod method,
                       int n, std::uint64_t seed);

Json PlanToJson(const FramePlan& plan);

// ---------------------------------------------------------------------------
// Frame materialization through an external decoder.

inline constexpr std::string_view kVideoPlaceholder = "{video}";
inline constexpr std::string_view kFrameIndexPlaceholder = "{frame_index}";
inline constexpr std::string_view kOutPlaceholder = "{out}";

// "<entry_id>_<index, zero-padded to 6>.img"
std::string FrameFileName(std::string_view entry_id, FrameIndex index);

// Throws ConfigError when a placeholder is missing or the decoder program
// cannot be found.
void ValidateDecoderTemplate(std::string_view command_template);

struct FrameExtraction {
  std::vector<std::filesystem::path> paths;  // plan order, duplicates shared
  std::vector<FrameIndex> failed_indices;

  bool ok() const { return failed_indices.empty(); }
};

inline constexpr char kDecodeFailure[] = "decode_failure";

// Runs the decoder once per distinct index. A nonzero exit, or a zero exit
// that leaves no output file, marks that index failed; the remaining indices
// are still attempted.
FrameExtraction ExtractFrames(const FramePlan& plan,
                              std::string_view decoder_command_template,
                              const std::filesystem::path& video_path,
                              const std::filesystem::path& out_dir);

}  // namespace shotcap::sampling

#endif  // SHOTCAP_SAMPLING_H_
