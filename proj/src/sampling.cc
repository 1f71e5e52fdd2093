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

#include "shotcap/sampling.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <unordered_set>

#include "shotcap/error.h"
#include "shotcap/process.h"

namespace shotcap::sampling {
namespace {

void CheckArguments(FrameIndex start, FrameIndex end, int n) {
  if (start < 0 || start >= end) {
    throw InvalidArgumentError("invalid span [" + std::to_string(start) + ", " +
                               std::to_string(end) + ")");
  }
  if (n < 1) {
    throw InvalidArgumentError("frame count must be positive, got " +
                               std::to_string(n));
  }
}

// Unbiased draw from [0, bound). The engine's output sequence is fixed by the
// standard, unlike std::uniform_int_distribution, so plans are portable.
std::uint64_t UniformBelow(std::mt19937_64& engine, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t x = engine();
    if (x >= threshold) return x % bound;
  }
}

void DrawFromHalf(std::mt19937_64& engine, FrameIndex lo, FrameIndex hi,
                  std::int64_t count, std::vector<FrameIndex>* out) {
  const auto size = static_cast<std::uint64_t>(hi - lo);
  if (count <= 0) return;
  if (static_cast<std::uint64_t>(count) <= size) {
    // Floyd's subset sampling.
    std::unordered_set<std::uint64_t> chosen;
    for (std::uint64_t j = size - static_cast<std::uint64_t>(count); j < size;
         ++j) {
      const std::uint64_t t = UniformBelow(engine, j + 1);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::uint64_t> offsets(chosen.begin(), chosen.end());
    std::sort(offsets.begin(), offsets.end());
    for (std::uint64_t offset : offsets) {
      out->push_back(lo + static_cast<FrameIndex>(offset));
    }
  } else {
    for (std::int64_t i = 0; i < count; ++i) {
      out->push_back(lo + static_cast<FrameIndex>(UniformBelow(engine, size)));
    }
  }
}

void ReplaceAll(std::string* text, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = text->find(from, pos)) != std::string::npos) {
    text->replace(pos, from.size(), to);
    pos += to.size();
  }
}

}  // namespace

const char* SamplingMethodName(SamplingMethod method) {
  return method == SamplingMethod::kUniform ? "uniform" : "head_tail";
}

SamplingMethod ParseSamplingMethod(std::string_view name) {
  if (name == "uniform") return SamplingMethod::kUniform;
  if (name == "head_tail") return SamplingMethod::kHeadTail;
  throw InvalidArgumentError("unknown sampling method '" + std::string(name) +
                             "' (expected uniform or head_tail)");
}

FramePlan UniformPlan(FrameIndex start, FrameIndex end, int n) {
  CheckArguments(start, end, n);
  FramePlan plan;
  plan.method = SamplingMethod::kUniform;
  plan.n_frames = n;
  plan.span = {start, end};
  plan.indices.reserve(static_cast<std::size_t>(n));
  const __int128 length = end - start;
  for (int k = 0; k < n; ++k) {
    // floor((k + 0.5) * len / n) in exact integer arithmetic.
    const __int128 offset = (2 * static_cast<__int128>(k) + 1) * length /
                            (2 * static_cast<__int128>(n));
    plan.indices.push_back(start + static_cast<FrameIndex>(offset));
  }
  return plan;
}

FramePlan HeadTailPlan(FrameIndex start, FrameIndex end, int n,
                       std::uint64_t seed) {
  CheckArguments(start, end, n);
  FramePlan plan;
  plan.method = SamplingMethod::kHeadTail;
  plan.n_frames = n;
  plan.seed = seed;
  plan.span = {start, end};
  plan.indices.reserve(static_cast<std::size_t>(n));

  const FrameIndex mid = start + (end - start) / 2;
  std::int64_t head_count = (static_cast<std::int64_t>(n) + 1) / 2;
  std::int64_t tail_count = n / 2;
  if (mid == start) {
    tail_count += head_count;
    head_count = 0;
  }
  std::mt19937_64 engine(seed);
  DrawFromHalf(engine, start, mid, head_count, &plan.indices);
  DrawFromHalf(engine, mid, end, tail_count, &plan.indices);
  std::sort(plan.indices.begin(), plan.indices.end());
  return plan;
}

FramePlan PlanForEntry(const dataset::ShotEntry& entry, SamplingMethod method,
                       int n, std::uint64_t seed) {
  FramePlan plan = method == SamplingMethod::kUniform
                       ? UniformPlan(entry.span.start, entry.span.end, n)
                       : HeadTailPlan(entry.span.start, entry.span.end, n, seed);
  plan.entry_id = entry.entry_id;
  plan.scope = entry.scope;
  return plan;
}

Json PlanToJson(const FramePlan& plan) {
  Json out;
  out["entry_id"] = plan.entry_id;
  out["scope"] = dataset::ScopeName(plan.scope);
  out["method"] = SamplingMethodName(plan.method);
  out["n_frames"] = plan.n_frames;
  out["seed"] = plan.seed;
  out["span"] = Json::array({plan.span.start, plan.span.end});
  out["indices"] = plan.indices;
  return out;
}

std::string FrameFileName(std::string_view entry_id, FrameIndex index) {
  char digits[32];
  std::snprintf(digits, sizeof(digits), "%06lld",
                static_cast<long long>(index));
  std::string name(entry_id);
  name += '_';
  name += digits;
  name += ".img";
  return name;
}

void ValidateDecoderTemplate(std::string_view command_template) {
  for (std::string_view placeholder :
       {kVideoPlaceholder, kFrameIndexPlaceholder, kOutPlaceholder}) {
    if (command_template.find(placeholder) == std::string_view::npos) {
      throw ConfigError("decoder command template lacks placeholder " +
                        std::string(placeholder));
    }
  }
  const std::string program = process::CommandProgram(command_template);
  if (!process::FindExecutable(program)) {
    throw ConfigError("decoder program '" + program + "' not found");
  }
}

FrameExtraction ExtractFrames(const FramePlan& plan,
                              std::string_view decoder_command_template,
                              const std::filesystem::path& video_path,
                              const std::filesystem::path& out_dir) {
  ValidateDecoderTemplate(decoder_command_template);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create frame directory '" + out_dir.string() +
                  "': " + ec.message());
  }

  std::map<FrameIndex, bool> decoded;  // index -> success
  FrameExtraction result;
  result.paths.reserve(plan.indices.size());
  for (FrameIndex index : plan.indices) {
    const std::filesystem::path out = out_dir / FrameFileName(plan.entry_id, index);
    result.paths.push_back(out);
    if (decoded.contains(index)) continue;

    std::string command(decoder_command_template);
    ReplaceAll(&command, kVideoPlaceholder, process::ShellQuote(video_path.string()));
    ReplaceAll(&command, kFrameIndexPlaceholder, std::to_string(index));
    ReplaceAll(&command, kOutPlaceholder, process::ShellQuote(out.string()));
    const process::CommandResult run = process::RunShellCommand(command);
    const bool ok = run.exit_code == 0 && std::filesystem::exists(out, ec);
    decoded[index] = ok;
    if (!ok) result.failed_indices.push_back(index);
  }
  return result;
}

}  // namespace shotcap::sampling
