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

#include "shotcap/decoding.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "shotcap/error.h"
#include "shotcap/text.h"

namespace shotcap::decoding {
namespace {

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double UnitInterval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Logit scale and stop-token drift for the mock model. The stop token starts
// below the word tokens and overtakes them after a dozen or so steps.
constexpr double kLogitScale = 4.0;
constexpr double kStopOffset = -2.0;
constexpr double kStopDriftPerStep = 0.25;

}  // namespace

void GenerationConfig::Validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw InvalidArgumentError("temperature must be positive and finite");
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) {
    throw InvalidArgumentError("top_p must lie in (0, 1]");
  }
  if (no_repeat_ngram_size < 0) {
    throw InvalidArgumentError("no_repeat_ngram_size must be non-negative");
  }
  if (max_new_tokens < 1) {
    throw InvalidArgumentError("max_new_tokens must be positive");
  }
}

void ValidateDistribution(const TokenDistribution& dist) {
  if (dist.probs.empty()) {
    throw InvalidArgumentError("distribution over an empty vocabulary");
  }
  double total = 0.0;
  for (double p : dist.probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw InvalidArgumentError("distribution has a negative or non-finite "
                                 "probability");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kDistributionTolerance) {
    throw InvalidArgumentError("distribution does not sum to 1");
  }
}

TokenDistribution TemperatureScale(std::span<const double> logits,
                                   double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw InvalidArgumentError("temperature must be positive and finite");
  }
  if (logits.empty()) throw InvalidArgumentError("empty logits");
  for (double l : logits) {
    if (!std::isfinite(l)) throw InvalidArgumentError("non-finite logit");
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  TokenDistribution dist;
  dist.probs.reserve(logits.size());
  double total = 0.0;
  for (double l : logits) {
    dist.probs.push_back(std::exp((l - top) / temperature));
    total += dist.probs.back();
  }
  for (double& p : dist.probs) p /= total;
  return dist;
}

TokenDistribution TopPFilter(const TokenDistribution& dist, double p) {
  ValidateDistribution(dist);
  if (!(p > 0.0 && p <= 1.0)) {
    throw InvalidArgumentError("top_p must lie in (0, 1]");
  }
  std::vector<std::size_t> order(dist.probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dist.probs[a] > dist.probs[b];
  });

  std::size_t keep = order.size();
  double mass = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    mass += dist.probs[order[i]];
    if (mass >= p) {
      keep = i + 1;
      break;
    }
  }
  double kept_mass = 0.0;
  for (std::size_t i = 0; i < keep; ++i) kept_mass += dist.probs[order[i]];

  TokenDistribution out;
  out.probs.assign(dist.probs.size(), 0.0);
  for (std::size_t i = 0; i < keep; ++i) {
    out.probs[order[i]] = dist.probs[order[i]] / kept_mass;
  }
  return out;
}

std::vector<TokenId> NoRepeatNgramBanned(std::span<const TokenId> history,
                                         int n) {
  if (n < 1) throw InvalidArgumentError("n-gram size must be at least 1");
  std::vector<TokenId> banned;
  const std::size_t len = history.size();
  const auto size = static_cast<std::size_t>(n);
  if (len < size) return banned;
  // The (n-1)-token suffix that a new token would extend.
  const std::span<const TokenId> suffix = history.subspan(len - size + 1);
  for (std::size_t i = 0; i + size <= len; ++i) {
    if (std::equal(suffix.begin(), suffix.end(), history.begin() + i)) {
      banned.push_back(history[i + size - 1]);
    }
  }
  std::sort(banned.begin(), banned.end());
  banned.erase(std::unique(banned.begin(), banned.end()), banned.end());
  return banned;
}

TokenDistribution MaskTokens(const TokenDistribution& dist,
                             std::span<const TokenId> banned) {
  TokenDistribution out = dist;
  for (TokenId t : banned) {
    if (t >= 0 && static_cast<std::size_t>(t) < out.probs.size()) {
      out.probs[static_cast<std::size_t>(t)] = 0.0;
    }
  }
  const double total = std::accumulate(out.probs.begin(), out.probs.end(), 0.0);
  if (!(total > 0.0)) return dist;
  for (double& p : out.probs) p /= total;
  return out;
}

namespace {

bool AllMassBanned(const TokenDistribution& dist, const std::vector<TokenId>& banned) {
  for (std::size_t j = 0; j < dist.probs.size(); ++j) {
    if (dist.probs[j] > 0.0 &&
        !std::binary_search(banned.begin(), banned.end(), static_cast<TokenId>(j))) {
      return false;
    }
  }
  return true;
}

}  // namespace

MockTrace GenerateMockTrace(std::string_view prompt,
                            const GenerationConfig& config) {
  config.Validate();
  const std::vector<std::string_view> words = SplitWhitespace(prompt);
  if (words.empty()) throw InvalidArgumentError("prompt has no tokens");

  MockTrace trace;
  std::unordered_map<std::string_view, TokenId> seen;
  for (std::string_view w : words) {
    if (seen.emplace(w, static_cast<TokenId>(trace.vocabulary.size())).second) {
      trace.vocabulary.emplace_back(w);
    }
  }
  const auto stop = static_cast<TokenId>(trace.vocabulary.size());
  trace.vocabulary.emplace_back("</s>");
  const std::size_t vocab = trace.vocabulary.size();

  const std::uint64_t digest = Fnv1a64(prompt);
  const std::uint64_t base = Mix64(digest ^ Mix64(config.seed));
  std::mt19937_64 engine(Mix64(config.seed) ^ digest);

  std::vector<double> logits(vocab);
  for (int step = 0; step < config.max_new_tokens; ++step) {
    const std::uint64_t step_key = Mix64(base ^ Mix64(static_cast<std::uint64_t>(step)));
    for (std::size_t j = 0; j < vocab; ++j) {
      logits[j] = kLogitScale * UnitInterval(Mix64(step_key ^ Mix64(j + 1)));
    }
    logits[static_cast<std::size_t>(stop)] +=
        kStopOffset + kStopDriftPerStep * step;

    TokenDistribution dist = TemperatureScale(logits, config.temperature);
    std::vector<TokenId> banned;
    if (config.no_repeat_ngram_size > 0) {
      banned = NoRepeatNgramBanned(trace.tokens, config.no_repeat_ngram_size);
      dist = MaskTokens(dist, banned);
    }
    dist = TopPFilter(dist, config.top_p);

    const double u = UnitInterval(engine());
    TokenId chosen = -1;
    if (AllMassBanned(dist, banned)) {
      // Every allowed token underflowed to zero; fall back to the best allowed
      // logit. The stop token is never banned, so one always exists.
      for (std::size_t j = 0; j < vocab; ++j) {
        const auto id = static_cast<TokenId>(j);
        if (std::binary_search(banned.begin(), banned.end(), id)) continue;
        if (chosen < 0 || logits[j] > logits[static_cast<std::size_t>(chosen)]) chosen = id;
      }
    } else {
      double cumulative = 0.0;
      for (std::size_t j = 0; j < vocab; ++j) {
        if (dist.probs[j] <= 0.0) continue;
        chosen = static_cast<TokenId>(j);
        cumulative += dist.probs[j];
        if (u < cumulative) break;
      }
    }
    if (chosen == stop) {
      trace.stopped = true;
      break;
    }
    trace.tokens.push_back(chosen);
  }
  return trace;
}

std::string GenerateMock(std::string_view prompt, const GenerationConfig& config) {
  const MockTrace trace = GenerateMockTrace(prompt, config);
  std::string out;
  for (TokenId t : trace.tokens) {
    if (!out.empty()) out += ' ';
    out += trace.vocabulary[static_cast<std::size_t>(t)];
  }
  return out;
}

}  // namespace shotcap::decoding
