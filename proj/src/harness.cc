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

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <thread>
#include <utility>

#include "shotcap/error.h"
#include "shotcap/prompting.h"
#include "shotcap/sft_dataset.h"

namespace shotcap::harness {
namespace {

namespace fs = std::filesystem;

constexpr char kMissingSource[] = "missing_source_path";

fs::path Resolve(const fs::path& base, const fs::path& p) {
  return p.is_absolute() || base.empty() ? p : base / p;
}

const Json* FindObject(const Json& json, const char* field, std::string_view context) {
  auto it = json.find(field);
  if (it == json.end() || it->is_null()) return nullptr;
  if (!it->is_object()) {
    throw ParseError(std::string(context) + ": '" + field + "' must be an object");
  }
  return &*it;
}

bool Has(const Json& json, const char* field) {
  auto it = json.find(field);
  return it != json.end() && !it->is_null();
}

decoding::GenerationConfig GenerationFromJson(const Json& json) {
  constexpr std::string_view kContext = "generation";
  decoding::GenerationConfig config;
  if (Has(json, "temperature")) config.temperature = RequireNumber(json, "temperature", kContext);
  if (Has(json, "top_p")) config.top_p = RequireNumber(json, "top_p", kContext);
  if (Has(json, "no_repeat_ngram_size")) {
    config.no_repeat_ngram_size =
        static_cast<int>(RequireInteger(json, "no_repeat_ngram_size", kContext));
  }
  if (Has(json, "max_new_tokens")) {
    config.max_new_tokens = static_cast<int>(RequireInteger(json, "max_new_tokens", kContext));
  }
  if (Has(json, "seed")) {
    const long long seed = RequireInteger(json, "seed", kContext);
    if (seed < 0) throw ConfigError("generation seed must be non-negative");
    config.seed = static_cast<std::uint64_t>(seed);
  }
  return config;
}

std::vector<metrics::ReferenceSet> ToReferenceSets(
    const std::vector<dataset::ReferenceRecord>& records, Task task) {
  std::vector<metrics::ReferenceSet> out;
  for (const auto& r : records) {
    if (r.scope && *r.scope != TaskScope(task)) continue;
    out.push_back({r.entry_id, r.references});
  }
  return out;
}

}  // namespace

dataset::Scope TaskScope(Task task) {
  return task == Task::kCaptioning ? dataset::Scope::kShot
                                   : dataset::Scope::kFullVideo;
}

void RunManifest::Validate() const {
  if (run_id.empty()) throw ConfigError("run_id must not be empty");
  if (dataset_path.empty()) throw ConfigError("run manifest needs a dataset_path");
  if (sampling.n_frames < 1) throw ConfigError("n_frames must be at least 1");
  if (max_prompt_tokens < 1) throw ConfigError("max_prompt_tokens must be positive");
  if (min_caption_tokens < 0) throw ConfigError("min_caption_tokens must be non-negative");
  generation.Validate();
  backend.Validate();
  if (!frame_decoder.empty()) sampling::ValidateDecoderTemplate(frame_decoder);
}

RunManifest RunManifestFromJson(const Json& json, const fs::path& base_dir) {
  constexpr std::string_view kContext = "run manifest";
  if (!json.is_object()) throw ParseError("run manifest must be an object");
  RunManifest m;
  OptionalString(json, "run_id", kContext, &m.run_id);
  std::string text;
  if (OptionalString(json, "task", kContext, &text)) m.task = metrics::ParseTask(text);
  m.dataset_path = Resolve(base_dir, RequireString(json, "dataset_path", kContext));
  if (OptionalString(json, "output_dir", kContext, &text)) {
    m.output_dir = Resolve(base_dir, text);
  } else {
    m.output_dir = base_dir.empty() ? fs::path(".") : base_dir;
  }
  if (Has(json, "max_prompt_tokens")) {
    const long long budget = RequireInteger(json, "max_prompt_tokens", kContext);
    if (budget < 1) throw ConfigError("max_prompt_tokens must be positive");
    m.max_prompt_tokens = static_cast<std::size_t>(budget);
  }
  if (Has(json, "min_caption_tokens")) {
    m.min_caption_tokens = static_cast<int>(RequireInteger(json, "min_caption_tokens", kContext));
  }
  if (const Json* s = FindObject(json, "sampling", kContext)) {
    if (OptionalString(*s, "method", "sampling", &text)) {
      m.sampling.method = sampling::ParseSamplingMethod(text);
    }
    if (Has(*s, "n_frames")) {
      m.sampling.n_frames = static_cast<int>(RequireInteger(*s, "n_frames", "sampling"));
    }
    if (Has(*s, "seed")) {
      const long long seed = RequireInteger(*s, "seed", "sampling");
      if (seed < 0) throw ConfigError("sampling seed must be non-negative");
      m.sampling.seed = static_cast<std::uint64_t>(seed);
    }
  }
  if (const Json* g = FindObject(json, "generation", kContext)) {
    m.generation = GenerationFromJson(*g);
  }
  if (const Json* b = FindObject(json, "backend", kContext)) {
    if (OptionalString(*b, "kind", "backend", &text)) m.backend.kind = ParseBackendKind(text);
    OptionalString(*b, "endpoint", "backend", &m.backend.endpoint);
    if (Has(*b, "timeout_seconds")) {
      m.backend.timeout_seconds = RequireNumber(*b, "timeout_seconds", "backend");
    }
    if (Has(*b, "max_in_flight")) {
      m.backend.max_in_flight = static_cast<int>(RequireInteger(*b, "max_in_flight", "backend"));
    }
  }
  if (const Json* f = FindObject(json, "frames", kContext)) {
    OptionalString(*f, "decoder", "frames", &m.frame_decoder);
  }
  m.Validate();
  return m;
}

RunManifest LoadRunManifest(const fs::path& path) {
  const std::string text = ReadTextFile(path);
  return RunManifestFromJson(ParseJsonDocument(text, path.string()),
                             path.parent_path());
}

Json RunManifestToJson(const RunManifest& m) {
  Json json{{"run_id", m.run_id},
            {"task", metrics::TaskName(m.task)},
            {"dataset_path", m.dataset_path.string()},
            {"output_dir", m.output_dir.string()},
            {"max_prompt_tokens", m.max_prompt_tokens},
            {"min_caption_tokens", m.min_caption_tokens},
            {"sampling",
             {{"method", sampling::SamplingMethodName(m.sampling.method)},
              {"n_frames", m.sampling.n_frames},
              {"seed", m.sampling.seed}}},
            {"generation",
             {{"temperature", m.generation.temperature},
              {"top_p", m.generation.top_p},
              {"no_repeat_ngram_size", m.generation.no_repeat_ngram_size},
              {"max_new_tokens", m.generation.max_new_tokens},
              {"seed", m.generation.seed}}},
            {"backend",
             {{"kind", BackendKindName(m.backend.kind)},
              {"endpoint", m.backend.endpoint},
              {"timeout_seconds", m.backend.timeout_seconds},
              {"max_in_flight", m.backend.max_in_flight}}}};
  if (!m.frame_decoder.empty()) json["frames"] = {{"decoder", m.frame_decoder}};
  return json;
}

std::string SerializePredictions(const std::vector<metrics::Prediction>& predictions) {
  std::string out;
  for (const auto& p : predictions) {
    Json line{{"entry_id", p.entry_id}, {"prediction", p.text}};
    if (!p.error.empty()) line["error"] = p.error;
    out += ToJsonLine(line);
  }
  return out;
}

std::vector<metrics::Prediction> ParsePredictions(std::string_view text,
                                                  std::string_view source) {
  std::vector<metrics::Prediction> out;
  std::size_t line = 0;
  for (const Json& obj : ParseJsonLines(text, source)) {
    const std::string context = std::string(source) + " record " + std::to_string(++line);
    metrics::Prediction p;
    p.entry_id = RequireString(obj, "entry_id", context);
    p.text = RequireString(obj, "prediction", context);
    OptionalString(obj, "error", context, &p.error);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<metrics::Prediction> LoadPredictions(const fs::path& path) {
  return ParsePredictions(ReadTextFile(path), path.string());
}

std::vector<dataset::ShotEntry> SelectTaskEntries(
    const std::vector<dataset::ShotEntry>& entries, Task task) {
  std::vector<dataset::ShotEntry> out;
  for (const auto& e : entries) {
    if (e.scope == TaskScope(task)) out.push_back(e);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.entry_id < b.entry_id; });
  return out;
}

GenerationOutput GeneratePredictions(const RunManifest& manifest) {
  manifest.Validate();
  std::unique_ptr<Backend> backend = MakeBackend(manifest.backend);
  backend->Start();
  try {
    GenerationOutput out = GeneratePredictions(manifest, *backend);
    backend->Stop();
    return out;
  } catch (...) {
    backend->Stop();
    throw;
  }
}

GenerationOutput GeneratePredictions(const RunManifest& manifest, Backend& backend) {
  manifest.Validate();
  const dataset::Manifest raw = dataset::LoadManifest(manifest.dataset_path);
  dataset::FilterOptions filter;
  filter.min_caption_tokens = manifest.min_caption_tokens;
  const dataset::PreparedDataset prepared = dataset::PrepareDataset(raw, filter);
  const std::vector<dataset::ShotEntry> entries =
      SelectTaskEntries(prepared.entries, manifest.task);

  std::map<std::string, const dataset::VideoRecord*> videos;
  for (const auto& v : prepared.videos) videos.emplace(v.video_id, &v);
  const fs::path manifest_dir = manifest.dataset_path.parent_path();

  std::vector<metrics::Prediction> predictions(entries.size());
  auto run_entry = [&](std::size_t i) {
    const dataset::ShotEntry& entry = entries[i];
    metrics::Prediction& slot = predictions[i];
    slot.entry_id = entry.entry_id;
    try {
      GenerationRequest request;
      request.entry_id = entry.entry_id;
      request.prompt = prompting::EnforceBudget(
                           prompting::RenderPrompt(entry, prompting::PromptMode::kEval),
                           manifest.max_prompt_tokens)
                           .text;
      request.plan = sampling::PlanForEntry(entry, manifest.sampling.method,
                                            manifest.sampling.n_frames,
                                            manifest.sampling.seed);
      request.config = manifest.generation;
      if (!manifest.frame_decoder.empty()) {
        const dataset::VideoRecord* video = videos.at(entry.video_id);
        if (!video->source_path) {
          slot.error = kMissingSource;
          return;
        }
        sampling::FrameExtraction frames = sampling::ExtractFrames(
            request.plan, manifest.frame_decoder,
            Resolve(manifest_dir, *video->source_path),
            manifest.output_dir / "frames");
        if (!frames.ok()) {
          slot.error = sampling::kDecodeFailure;
          return;
        }
        request.frame_paths = std::move(frames.paths);
      }
      GenerationResult result = backend.Generate(request);
      slot.text = std::move(result.text);
      slot.error = std::move(result.error);
      if (!slot.error.empty()) slot.text.clear();
    } catch (const std::exception& e) {
      slot.text.clear();
      slot.error = e.what();
    }
  };

  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(manifest.backend.max_in_flight), entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) run_entry(i);
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  GenerationOutput out;
  for (const auto& p : predictions) out.failures += p.error.empty() ? 0 : 1;
  out.predictions_path = manifest.output_dir / kPredictionsFile;
  out.references_path = manifest.output_dir / kReferencesFile;
  WriteTextFile(out.predictions_path, SerializePredictions(predictions));
  WriteTextFile(out.references_path, dataset::RenderReferenceLines(entries));
  out.predictions = std::move(predictions);
  return out;
}

metrics::MetricReport EvaluateRun(const fs::path& predictions_path,
                                  const fs::path& references_path,
                                  const EvaluateOptions& options) {
  const auto predictions = LoadPredictions(predictions_path);
  const auto references =
      ToReferenceSets(dataset::LoadReferences(references_path), options.task);
  metrics::MetricReport report =
      metrics::ComputeReport(predictions, references, options.task, options.model);
  report.metadata["predictions"] = predictions_path.filename().string();
  report.metadata["references"] = references_path.filename().string();
  report.metadata["items"] = report.per_item.size();
  if (options.run) {
    Json run = RunManifestToJson(*options.run);
    // Paths vary between machines; keep the report reproducible.
    run.erase("dataset_path");
    run.erase("output_dir");
    run["backend"].erase("max_in_flight");
    report.metadata["run"] = std::move(run);
  }
  return report;
}

}  // namespace shotcap::harness
