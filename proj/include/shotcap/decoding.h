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

#ifndef SHOTCAP_DECODING_H_
#define SHOTCAP_DECODING_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shotcap::decoding {

using TokenId = int;

struct GenerationConfig {
  double temperature = 0.2;
  double top_p = 0.9;
  int no_repeat_ngram_size = 3;  // 0 disables
  int max_new_tokens = 128;
  std::uint64_t seed = 0;

  // Throws InvalidArgumentError on out-of-range fields.
  void Validate() const;
  bool operator==(const GenerationConfig&) const = default;
};

// A probability vector over a finite vocabulary; sums to 1 within 1e-9.
struct TokenDistribution {
  std::vector<double> probs;
};

inline constexpr double kDistributionTolerance = 1e-9;

// Throws InvalidArgumentError unless probs are non-negative, finite and sum
// to 1 within kDistributionTolerance.
void ValidateDistribution(const TokenDistribution& dist);

// Softmax of logits / temperature with max subtraction.
TokenDistribution TemperatureScale(std::span<const double> logits,
                                   double temperature);

// Nucleus filter: keeps the shortest prefix of tokens, ordered by probability
// descending and then by index ascending, whose mass reaches `p` (at least one
// token), zeroes the rest and renormalizes.
TokenDistribution TopPFilter(const TokenDistribution& dist, double p);

// Tokens that would complete an n-gram already present in `history`, in
// ascending order. Requires n >= 1; n = 1 bans every token already seen.
std::vector<TokenId> NoRepeatNgramBanned(std::span<const TokenId> history,
                                         int n);

// Zeroes the banned tokens and renormalizes. If every token with mass is
// banned the input is returned unchanged.
TokenDistribution MaskTokens(const TokenDistribution& dist,
                             std::span<const TokenId> banned);

// Deterministic stand-in for a caption model. The vocabulary is the prompt's
// distinct whitespace tokens plus a stop token; per-step logits come from a
// hash of (prompt digest, step, seed). Each step applies temperature, the
// no-repeat mask, top-p, then draws from a PRNG seeded by (seed, digest).
std::string GenerateMock(std::string_view prompt, const GenerationConfig& config);

// Same as GenerateMock but returns the sampled token ids (stop token
// excluded) and the vocabulary, for inspection.
struct MockTrace {
  std::vector<std::string> vocabulary;  // last element is the stop token
  std::vector<TokenId> tokens;
  bool stopped = false;  // true if the stop token ended generation
};
MockTrace GenerateMockTrace(std::string_view prompt,
                            const GenerationConfig& config);

}  // namespace shotcap::decoding

#endif  // SHOTCAP_DECODING_H_
