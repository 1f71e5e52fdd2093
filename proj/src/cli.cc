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


#include "shotcap/cli.h"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shotcap/dataset.h"
#include "shotcap/harness.h"
#include "shotcap/json_lines.h"
#include "shotcap/prompting.h"
#include "shotcap/report.h"
#include "shotcap/sampling.h"
#include "shotcap/sft_dataset.h"

namespace shotcap::cli {
namespace {

namespace fs = std::filesystem;

constexpr char kTrainFile[] = "train.jsonl";
constexpr char kEvalFile[] = "eval.jsonl";
constexpr char kRejectionsFile[] = "rejections.jsonl";

void Emit(std::ostream& out, const std::optional<fs::path>& path,
          const std::string& text) {
  if (path) {
    WriteTextFile(*path, text);
  } else {
    out << text;
  }
}

// --- preprocess ------------------------------------------------------------

struct PreprocessFlags {
  std::string manifest;
  std::string out_dir;
  std::size_t max_prompt_tokens = prompting::kDefaultMaxPromptTokens;
  int min_caption_tokens = 1;
};

void AddPreprocess(CLI::App& app, PreprocessFlags& f) {
  auto* cmd = app.add_subcommand(
      "preprocess",
      "Validate and filter an annotation manifest; write train/eval SFT files, "
      "references and the rejection log");
  cmd->add_option("manifest", f.manifest, "Annotation manifest (JSON)")->required();
  cmd->add_option("-o,--out-dir", f.out_dir, "Output directory")->required();
  cmd->add_option("--max-prompt-tokens", f.max_prompt_tokens,
                  "Prompt token budget (whitespace tokens)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--min-caption-tokens", f.min_caption_tokens,
                  "Captions shorter than this are rejected")
      ->check(CLI::NonNegativeNumber);
}

int RunPreprocess(const PreprocessFlags& f, std::ostream& out) {
  const dataset::Manifest manifest = dataset::LoadManifest(f.manifest);
  dataset::FilterOptions filter;
  filter.min_caption_tokens = f.min_caption_tokens;
  const dataset::PreparedDataset prepared = dataset::PrepareDataset(manifest, filter);

  const fs::path dir = f.out_dir;
  dataset::SftWriteOptions options;
  options.max_prompt_tokens = f.max_prompt_tokens;
  dataset::WriteSftDataset(prepared.entries, prompting::PromptMode::kTrain,
                           dir / kTrainFile, options);
  options.references_path = dir / harness::kReferencesFile;
  dataset::WriteSftDataset(prepared.entries, prompting::PromptMode::kEval,
                           dir / kEvalFile, options);
  WriteTextFile(dir / kRejectionsFile, dataset::SerializeRejectionLog(prepared.log));

  std::size_t shots = 0;
  for (const auto& e : prepared.entries) shots += e.scope == dataset::Scope::kShot;
  out << "videos: " << prepared.videos.size() << "\n"
      << "entries: " << prepared.entries.size() << " (" << shots << " shot, "
      << prepared.entries.size() - shots << " full_video)\n"
      << "rejected: " << prepared.log.size() << "\n";
  return kExitOk;
}

// --- plan ------------------------------------------------------------------

struct SamplingFlags {
  std::string method = "uniform";
  int n_frames = sampling::kDefaultFrames;
  std::uint64_t seed = sampling::kDefaultSeed;
};

void AddSamplingFlags(CLI::App* cmd, SamplingFlags& f) {
  cmd->add_option("--method", f.method, "Frame sampling method")
      ->check(CLI::IsMember({"uniform", "head_tail"}));
  cmd->add_option("--n-frames", f.n_frames, "Frames per entry")->check(CLI::PositiveNumber);
  cmd->add_option("--sampling-seed", f.seed, "Seed for head_tail sampling");
}

struct PlanFlags {
  std::string manifest;
  std::string span;
  std::string scope = "all";
  std::string output;
  SamplingFlags sampling;
};

void AddPlan(CLI::App& app, PlanFlags& f) {
  auto* cmd = app.add_subcommand("plan", "Compute frame plans for dataset entries");
  auto* manifest = cmd->add_option("manifest", f.manifest, "Annotation manifest (JSON)");
  auto* span = cmd->add_option("--span", f.span, "Plan a single START:END span instead");
  manifest->excludes(span);
  cmd->add_option("--scope", f.scope, "Entries to plan")
      ->check(CLI::IsMember({"all", "shot", "full_video"}));
  cmd->add_option("-o,--output", f.output, "Write JSONL here instead of stdout");
  AddSamplingFlags(cmd, f.sampling);
}

sampling::FramePlan MakePlan(const dataset::Span& span, const SamplingFlags& f) {
  return sampling::ParseSamplingMethod(f.method) == sampling::SamplingMethod::kUniform
             ? sampling::UniformPlan(span.start, span.end, f.n_frames)
             : sampling::HeadTailPlan(span.start, span.end, f.n_frames, f.seed);
}

int RunPlan(const PlanFlags& f, std::ostream& out) {
  std::optional<fs::path> output;
  if (!f.output.empty()) output = f.output;
  std::string text;
  if (!f.span.empty()) {
    const auto colon = f.span.find(':');
    dataset::Span span;
    try {
      if (colon == std::string::npos) throw std::invalid_argument("no colon");
      std::size_t used = 0;
      span.start = std::stoll(f.span.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("start");
      const std::string end = f.span.substr(colon + 1);
      span.end = std::stoll(end, &used);
      if (used != end.size()) throw std::invalid_argument("end");
    } catch (const std::exception&) {
      throw InvalidArgumentError("--span expects START:END, got '" + f.span + "'");
    }
    text = ToJsonLine(sampling::PlanToJson(MakePlan(span, f.sampling)));
  } else {
    if (f.manifest.empty()) {
      throw InvalidArgumentError("plan needs a manifest or --span");
    }
    const auto prepared = dataset::PrepareDataset(dataset::LoadManifest(f.manifest));
    const auto method = sampling::ParseSamplingMethod(f.sampling.method);
    for (const auto& entry : prepared.entries) {
      if (f.scope != "all" && dataset::ScopeName(entry.scope) != f.scope) continue;
      text += ToJsonLine(sampling::PlanToJson(sampling::PlanForEntry(
          entry, method, f.sampling.n_frames, f.sampling.seed)));
    }
  }
  Emit(out, output, text);
  return kExitOk;
}

// --- render ----------------------------------------------------------------

struct RenderFlags {
  std::string manifest;
  std::string mode = "eval";
  std::string entry;
  std::string output;
  std::size_t max_prompt_tokens = prompting::kDefaultMaxPromptTokens;
};

void AddRender(CLI::App& app, RenderFlags& f) {
  auto* cmd = app.add_subcommand("render", "Render instruction prompts for dataset entries");
  cmd->add_option("manifest", f.manifest, "Annotation manifest (JSON)")->required();
  cmd->add_option("--mode", f.mode, "Prompt mode")->check(CLI::IsMember({"train", "eval"}));
  cmd->add_option("--entry", f.entry, "Print only this entry's prompt text");
  cmd->add_option("--max-prompt-tokens", f.max_prompt_tokens,
                  "Prompt token budget (whitespace tokens)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("-o,--output", f.output, "Write here instead of stdout");
}

int RunRender(const RenderFlags& f, std::ostream& out) {
  const auto prepared = dataset::PrepareDataset(dataset::LoadManifest(f.manifest));
  const auto mode = prompting::ParsePromptMode(f.mode);
  std::optional<fs::path> output;
  if (!f.output.empty()) output = f.output;
  std::string text;
  bool found = false;
  for (const auto& entry : prepared.entries) {
    if (!f.entry.empty() && entry.entry_id != f.entry) continue;
    found = true;
    const prompting::PromptInstance prompt = prompting::EnforceBudget(
        prompting::RenderPrompt(entry, mode), f.max_prompt_tokens);
    if (!f.entry.empty()) {
      text = prompt.text + "\n";
      break;
    }
    text += ToJsonLine(Json{{"entry_id", prompt.entry_id},
                            {"mode", prompting::PromptModeName(mode)},
                            {"token_count", prompt.token_count},
                            {"prompt", prompt.text}});
  }
  if (!f.entry.empty() && !found) {
    throw InvalidArgumentError("no entry '" + f.entry + "' in " + f.manifest);
  }
  Emit(out, output, text);
  return kExitOk;
}

// --- generate --------------------------------------------------------------

struct GenerateFlags {
  std::string run;
  std::string dataset;
  std::string output_dir = ".";
  std::string run_id = "run";
  std::string task = "captioning";
  std::string backend = "mock";
  std::string endpoint;
  double timeout = harness::kDefaultTimeoutSeconds;
  int max_in_flight = harness::kDefaultMaxInFlight;
  std::size_t max_prompt_tokens = prompting::kDefaultMaxPromptTokens;
  double temperature = decoding::GenerationConfig{}.temperature;
  double top_p = decoding::GenerationConfig{}.top_p;
  int no_repeat_ngram_size = decoding::GenerationConfig{}.no_repeat_ngram_size;
  int max_new_tokens = decoding::GenerationConfig{}.max_new_tokens;
  std::uint64_t seed = decoding::GenerationConfig{}.seed;
  SamplingFlags sampling;
  std::string frame_decoder;

  CLI::App* cmd = nullptr;
};

void AddGenerate(CLI::App& app, GenerateFlags& f) {
  auto* cmd = app.add_subcommand(
      "generate", "Generate predictions for every entry of a task with a backend");
  f.cmd = cmd;
  cmd->add_option("--run", f.run, "Run manifest (JSON); flags override its fields");
  cmd->add_option("--dataset", f.dataset, "Annotation manifest (JSON)");
  cmd->add_option("-o,--output-dir", f.output_dir, "Where predictions are written");
  cmd->add_option("--run-id", f.run_id, "Run identifier");
  cmd->add_option("--task", f.task, "Task")
      ->check(CLI::IsMember({"captioning", "summarization"}));
  cmd->add_option("--backend", f.backend, "Backend kind")
      ->check(CLI::IsMember({"mock", "subprocess", "network"}));
  cmd->add_option("--endpoint", f.endpoint, "Subprocess command or http:// URL");
  cmd->add_option("--timeout", f.timeout, "Per-entry timeout in seconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-in-flight", f.max_in_flight, "Concurrent backend requests")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-prompt-tokens", f.max_prompt_tokens,
                  "Prompt token budget (whitespace tokens)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--temperature", f.temperature, "Sampling temperature");
  cmd->add_option("--top-p", f.top_p, "Nucleus sampling mass");
  cmd->add_option("--no-repeat-ngram-size", f.no_repeat_ngram_size,
                  "Ban repeated n-grams of this size (0 disables)");
  cmd->add_option("--max-new-tokens", f.max_new_tokens, "Generation length limit");
  cmd->add_option("--seed", f.seed, "Generation seed");
  cmd->add_option("--frame-decoder", f.frame_decoder,
                  "Frame extraction command with {video}, {frame_index} and {out}");
  AddSamplingFlags(cmd, f.sampling);
}

harness::RunManifest BuildRunManifest(const GenerateFlags& f) {
  harness::RunManifest m;
  if (!f.run.empty()) m = harness::LoadRunManifest(f.run);
  const bool from_file = !f.run.empty();
  auto given = [&](const char* name) { return !from_file || f.cmd->count(name) > 0; };

  if (given("--dataset") && !f.dataset.empty()) m.dataset_path = f.dataset;
  if (given("--output-dir")) m.output_dir = f.output_dir;
  if (given("--run-id")) m.run_id = f.run_id;
  if (given("--task")) m.task = metrics::ParseTask(f.task);
  if (given("--backend")) m.backend.kind = harness::ParseBackendKind(f.backend);
  if (given("--endpoint")) m.backend.endpoint = f.endpoint;
  if (given("--timeout")) m.backend.timeout_seconds = f.timeout;
  if (given("--max-in-flight")) m.backend.max_in_flight = f.max_in_flight;
  if (given("--max-prompt-tokens")) m.max_prompt_tokens = f.max_prompt_tokens;
  if (given("--temperature")) m.generation.temperature = f.temperature;
  if (given("--top-p")) m.generation.top_p = f.top_p;
  if (given("--no-repeat-ngram-size")) m.generation.no_repeat_ngram_size = f.no_repeat_ngram_size;
  if (given("--max-new-tokens")) m.generation.max_new_tokens = f.max_new_tokens;
  if (given("--seed")) m.generation.seed = f.seed;
  if (given("--method")) m.sampling.method = sampling::ParseSamplingMethod(f.sampling.method);
  if (given("--n-frames")) m.sampling.n_frames = f.sampling.n_frames;
  if (given("--sampling-seed")) m.sampling.seed = f.sampling.seed;
  if (given("--frame-decoder")) m.frame_decoder = f.frame_decoder;
  if (m.dataset_path.empty()) {
    throw ConfigError("generate needs --dataset or a run manifest with dataset_path");
  }
  return m;
}

int RunGenerate(const GenerateFlags& f, std::ostream& out) {
  const harness::RunManifest manifest = BuildRunManifest(f);
  const harness::GenerationOutput result = harness::GeneratePredictions(manifest);
  out << "predictions: " << result.predictions_path.string() << " ("
      << result.predictions.size() << " entries, " << result.failures
      << " failed)\n"
      << "references: " << result.references_path.string() << "\n";
  return kExitOk;
}

// --- evaluate / report -----------------------------------------------------

struct EvaluateFlags {
  std::string predictions;
  std::string references;
  std::string task = "captioning";
  std::string model = "model";
  std::string run;
  std::string format = "table";
  std::string report_out;
};

void AddEvaluate(CLI::App& app, EvaluateFlags& f) {
  auto* cmd = app.add_subcommand("evaluate", "Score predictions against references");
  cmd->add_option("predictions", f.predictions, "Predictions JSONL")->required();
  cmd->add_option("references", f.references, "References JSONL")->required();
  cmd->add_option("--task", f.task, "Task")
      ->check(CLI::IsMember({"captioning", "summarization"}));
  cmd->add_option("--model", f.model, "Model name shown in the table");
  cmd->add_option("--run", f.run, "Run manifest to record in the report metadata");
  cmd->add_option("--format", f.format, "Output format on stdout")
      ->check(CLI::IsMember({"table", "structured"}));
  cmd->add_option("--report-out", f.report_out, "Also write the structured report here");
}

int RunEvaluate(const EvaluateFlags& f, std::ostream& out) {
  harness::EvaluateOptions options;
  options.task = metrics::ParseTask(f.task);
  options.model = f.model;
  if (!f.run.empty()) options.run = harness::LoadRunManifest(f.run);
  const metrics::MetricReport report =
      harness::EvaluateRun(f.predictions, f.references, options);
  if (!f.report_out.empty()) {
    WriteTextFile(f.report_out,
                  metrics::EmitReport(report, metrics::ReportFormat::kStructured));
  }
  out << metrics::EmitReport(report, metrics::ParseReportFormat(f.format));
  return kExitOk;
}

struct ReportFlags {
  std::vector<std::string> reports;
  std::string format = "table";
  std::string output;
};

void AddReport(CLI::App& app, ReportFlags& f) {
  auto* cmd = app.add_subcommand(
      "report", "Render structured reports; several reports become one table");
  cmd->add_option("reports", f.reports, "Structured report files")->required();
  cmd->add_option("--format", f.format, "Output format")
      ->check(CLI::IsMember({"table", "structured"}));
  cmd->add_option("-o,--output", f.output, "Write here instead of stdout");
}

int RunReport(const ReportFlags& f, std::ostream& out) {
  std::vector<metrics::MetricReport> reports;
  for (const std::string& path : f.reports) {
    reports.push_back(metrics::ParseReport(ReadTextFile(path), path));
  }
  std::string text;
  if (metrics::ParseReportFormat(f.format) == metrics::ReportFormat::kTable) {
    text = metrics::RenderTable(reports);
  } else {
    for (const auto& r : reports) text += metrics::EmitReport(r, metrics::ReportFormat::kStructured);
  }
  std::optional<fs::path> output;
  if (!f.output.empty()) output = f.output;
  Emit(out, output, text);
  return kExitOk;
}

}  // namespace

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
    case ErrorKind::kBackend:
      return kExitIo;
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kParse:
    case ErrorKind::kAlignment:
    case ErrorKind::kBudget:
    case ErrorKind::kConfig:
      return kExitValidation;
  }
  return kExitValidation;
}

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Shot-level video captioning toolkit: preprocessing, frame planning, "
               "prompting, generation and evaluation.",
               "shotcap");
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML file with option defaults; flags win");

  PreprocessFlags preprocess;
  PlanFlags plan;
  RenderFlags render;
  GenerateFlags generate;
  EvaluateFlags evaluate;
  ReportFlags report;
  AddPreprocess(app, preprocess);
  AddPlan(app, plan);
  AddRender(app, render);
  AddGenerate(app, generate);
  AddEvaluate(app, evaluate);
  AddReport(app, report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (app.got_subcommand("preprocess")) return RunPreprocess(preprocess, out);
    if (app.got_subcommand("plan")) return RunPlan(plan, out);
    if (app.got_subcommand("render")) return RunRender(render, out);
    if (app.got_subcommand("generate")) return RunGenerate(generate, out);
    if (app.got_subcommand("evaluate")) return RunEvaluate(evaluate, out);
    if (app.got_subcommand("report")) return RunReport(report, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}

}  // namespace shotcap::cli
