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

#ifndef SHOTCAP_METRICS_H_
#define SHOTCAP_METRICS_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace shotcap::metrics {

// Lowercased tokens with the punctuation strip set removed.
struct TokenizedCaption {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  bool operator==(const TokenizedCaption&) const = default;
};

// Characters deleted before splitting: . , ! ? ; : " ' ( ) [ ] -
inline constexpr std::string_view kStripCharacters = ".,!?;:\"'()[]-";

TokenizedCaption NormalizeTokenize(std::string_view text);

// Convenience for tests and fixtures: whitespace split without normalization.
TokenizedCaption Tokens(std::string_view text);

struct CorpusItem {
  std::string entry_id;
  TokenizedCaption candidate;
  std::vector<TokenizedCaption> references;  // at least one
};

// Items with unique ids, each with one or more references.
struct CorpusPair {
  std::vector<CorpusItem> items;

  // Throws InvalidArgumentError on duplicate ids or reference-less items.
  void Validate() const;
};

inline constexpr int kBleuOrder = 4;
inline constexpr double kRougeBeta = 1.2;
inline constexpr double kMeteorAlpha = 0.9;
inline constexpr double kMeteorBeta = 3.0;
inline constexpr double kMeteorGamma = 0.5;
inline constexpr double kCiderSigma = 6.0;
inline constexpr int kCiderOrder = 4;

// Corpus BLEU-4: clipped n-gram precisions pooled over the corpus, geometric
// mean, brevity penalty against the closest reference length (ties go to the
// shorter). Unsmoothed, so any zero precision gives 0. Throws
// InvalidArgumentError on an empty corpus.
double Bleu4Corpus(const CorpusPair& corpus);

std::size_t LcsLength(const std::vector<std::string>& a,
                      const std::vector<std::string>& b);

// LCS-based F-measure with beta = 1.2 against one reference.
double RougeLItem(const TokenizedCaption& candidate,
                  const TokenizedCaption& reference);
// Max over references, mean over items.
double RougeLCorpus(const CorpusPair& corpus);

// One candidate-to-reference link chosen by the METEOR aligner.
struct MeteorMatch {
  std::size_t candidate_index;
  std::size_t reference_index;
  bool exact;  // false for stem matches
};

struct MeteorAlignment {
  std::vector<MeteorMatch> matches;  // sorted by candidate index
  std::size_t chunks = 0;
  // False when the chunk search hit its node budget and `chunks` is the best
  // arrangement found rather than a proven minimum.
  bool chunks_exact = true;
};

// Exact matches first, then Porter-stem matches among the leftovers; every
// token takes part in at most one match. The match count is fixed by those
// two stages; among alignments achieving it, the one with the fewest chunks
// is returned, ties broken towards leftmost reference positions.
MeteorAlignment MeteorAlign(const TokenizedCaption& candidate,
                            const TokenizedCaption& reference);

// F_mean * (1 - 0.5 * (chunks / m)^3), F_mean = P R / (0.9 P + 0.1 R).
double MeteorItem(const TokenizedCaption& candidate,
                  const TokenizedCaption& reference);
double MeteorCorpus(const CorpusPair& corpus);

// CIDEr-D on the raw scale (at most 1). Needs at least two items so document
// frequencies are meaningful; throws InvalidArgumentError otherwise.
double CiderDCorpus(const CorpusPair& corpus);
// Per-item CIDEr-D values in corpus order (same preconditions).
std::vector<double> CiderDItems(const CorpusPair& corpus);

}  // namespace shotcap::metrics

#endif  // SHOTCAP_METRICS_H_
