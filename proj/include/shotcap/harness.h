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


#ifndef SHOTCAP_HARNESS_H_
#define SHOTCAP_HARNESS_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shotcap/backend.h"
#include "shotcap/dataset.h"
#include "shotcap/decoding.h"
#include "shotcap/json_lines.h"
#include "shotcap/prompting.h"
#include "shotcap/report.h"
#include "shotcap/sampling.h"

namespace shotcap::harness {

using metrics::Task;

dataset::Scope TaskScope(Task task);

struct SamplingSettings {
  sampling::SamplingMethod method = sampling::SamplingMethod::kUniform;
  int n_frames = sampling::kDefaultFrames;
  std::uint64_t seed = sampling::kDefaultSeed;
};

// Everything a `generate` run needs. Relative paths in a manifest file are
// resolved against the file's directory.
struct RunManifest {
  std::string run_id = "run";
  Task task = Task::kCaptioning;
  SamplingSettings sampling;
  decoding::GenerationConfig generation;
  BackendDescriptor backend;
  std::filesystem::path dataset_path;  // raw annotation manifest
  std::filesystem::path output_dir = ".";
  std::size_t max_prompt_tokens = prompting::kDefaultMaxPromptTokens;
  int min_caption_tokens = 1;
  // Optional external frame decoder; see sampling::ExtractFrames.
  std::string frame_decoder;

  // Throws ConfigError or InvalidArgumentError.
  void Validate() const;
};

RunManifest RunManifestFromJson(const Json& json,
                                const std::filesystem::path& base_dir);
RunManifest LoadRunManifest(const std::filesystem::path& path);
Json RunManifestToJson(const RunManifest& manifest);

inline constexpr char kPredictionsFile[] = "predictions.jsonl";
inline constexpr char kReferencesFile[] = "references.jsonl";

std::string SerializePredictions(const std::vector<metrics::Prediction>& predictions);
std::vector<metrics::Prediction> ParsePredictions(std::string_view text,
                                                  std::string_view source);
std::vector<metrics::Prediction> LoadPredictions(const std::filesystem::path& path);

// Entries of `entries` that belong to the task, in entry-id order.
std::vector<dataset::ShotEntry> SelectTaskEntries(
    const std::vector<dataset::ShotEntry>& entries, Task task);

struct GenerationOutput {
  std::vector<metrics::Prediction> predictions;  // entry-id order
  std::filesystem::path predictions_path;
  std::filesystem::path references_path;
  std::size_t failures = 0;
};

// Loads, filters and segments the dataset, then asks the backend for every
// entry in the task scope with at most `max_in_flight` requests outstanding.
// Writes predictions.jsonl and references.jsonl into the output directory.
// Throws BackendError when the backend cannot be started.
GenerationOutput GeneratePredictions(const RunManifest& manifest);

// Same, with a caller-owned backend (already started).
GenerationOutput GeneratePredictions(const RunManifest& manifest,
                                     Backend& backend);

struct EvaluateOptions {
  Task task = Task::kCaptioning;
  std::string model = "model";
  // Attached to the report's metadata when set.
  std::optional<RunManifest> run;
};

// References whose scope does not match the task are ignored, so one
// references file can serve both tasks.
metrics::MetricReport EvaluateRun(const std::filesystem::path& predictions_path,
                                  const std::filesystem::path& references_path,
                                  const EvaluateOptions& options);

}  // namespace shotcap::harness

#endif  // SHOTCAP_HARNESS_H_
