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

#include "shotcap/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>

#include "shotcap/error.h"
#include "shotcap/stemmer.h"
#include "shotcap/text.h"

namespace shotcap::metrics {
namespace {

// N-gram keys join tokens with a unit separator, which the tokenizer never
// produces inside a token.
constexpr char kNgramSeparator = '\x1f';

using NgramCounts = std::unordered_map<std::string, int>;

NgramCounts CountNgrams(const std::vector<std::string>& tokens, int n) {
  NgramCounts counts;
  const auto size = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + size <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < size; ++k) {
      key += kNgramSeparator;
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

void RequireNonEmpty(const CorpusPair& corpus, const char* metric) {
  if (corpus.items.empty()) {
    throw InvalidArgumentError(std::string(metric) + " needs a non-empty corpus");
  }
  corpus.Validate();
}

// ---------------------------------------------------------------------------
// METEOR alignment search.

// Exhaustive memoized search over candidate positions. Each state fixes which
// reference tokens are taken and how much of each stage's quota is left.
class MeteorAligner {
 public:
  MeteorAligner(const TokenizedCaption& candidate,
                const TokenizedCaption& reference)
      : cand_(candidate.tokens), ref_(reference.tokens) {
    Index();
  }

  MeteorAlignment Align() {
    MeteorAlignment result;
    if (total_matches_ == 0) return result;
    // Both greedy passes reach the maximal match count, so a single chunk
    // cannot be improved on.
    MeteorAlignment diagonal = Greedy(/*prefer_diagonal=*/true);
    if (diagonal.chunks == 1) return diagonal;

    try {
      State start;
      start.used.assign((ref_.size() + 63) / 64, 0);
      start.exact_left = exact_quota_;
      start.stem_left = stem_quota_;
      const int best = Solve(0, -1, start);
      if (best < kInfinity) {
        result.matches = Reconstruct(start);
        result.chunks = static_cast<std::size_t>(best);
        return result;
      }
    } catch (const BudgetExhausted&) {
    }
    // Search too large: fall back to the better of two greedy alignments.
    result = Greedy(/*prefer_diagonal=*/false);
    if (diagonal.chunks < result.chunks) result = std::move(diagonal);
    result.chunks_exact = false;
    return result;
  }

 private:
  static constexpr int kInfinity = std::numeric_limits<int>::max() / 2;
  static constexpr std::size_t kMaxStates = 250000;

  struct BudgetExhausted {};

  struct State {
    std::vector<std::uint64_t> used;
    std::vector<int> exact_left;  // per word id
    std::vector<int> stem_left;   // per stem id
  };

  struct Memo {
    int cost;
    int choice;  // reference index, or -1 for "unmatched"
  };

  void Index() {
    std::unordered_map<std::string, int> word_ids;
    std::unordered_map<std::string, int> stem_ids;
    auto word_id = [&](const std::string& w) {
      auto [it, inserted] = word_ids.emplace(w, static_cast<int>(word_ids.size()));
      return it->second;
    };
    auto stem_id = [&](const std::string& w) {
      std::string s = PorterStem(w);
      auto [it, inserted] = stem_ids.emplace(s, static_cast<int>(stem_ids.size()));
      return it->second;
    };
    for (const auto& t : cand_) {
      cand_word_.push_back(word_id(t));
      cand_stem_.push_back(stem_id(t));
    }
    for (const auto& t : ref_) {
      ref_word_.push_back(word_id(t));
      ref_stem_.push_back(stem_id(t));
    }
    word_count_ = word_ids.size();
    word_stem_.assign(word_count_, 0);
    for (std::size_t i = 0; i < cand_.size(); ++i) word_stem_[cand_word_[i]] = cand_stem_[i];
    for (std::size_t j = 0; j < ref_.size(); ++j) word_stem_[ref_word_[j]] = ref_stem_[j];

    std::vector<int> cand_count(word_count_, 0), ref_count(word_count_, 0);
    for (int w : cand_word_) ++cand_count[w];
    for (int w : ref_word_) ++ref_count[w];
    exact_quota_.assign(word_count_, 0);
    std::vector<int> cand_left(stem_ids.size(), 0), ref_left(stem_ids.size(), 0);
    for (std::size_t w = 0; w < word_count_; ++w) {
      exact_quota_[w] = std::min(cand_count[w], ref_count[w]);
      cand_left[word_stem_[w]] += cand_count[w] - exact_quota_[w];
      ref_left[word_stem_[w]] += ref_count[w] - exact_quota_[w];
      total_matches_ += exact_quota_[w];
    }
    stem_quota_.assign(stem_ids.size(), 0);
    for (std::size_t s = 0; s < stem_ids.size(); ++s) {
      stem_quota_[s] = std::min(cand_left[s], ref_left[s]);
      total_matches_ += stem_quota_[s];
    }
  }

  static bool Used(const State& state, std::size_t j) {
    return (state.used[j / 64] >> (j % 64)) & 1U;
  }
  static void SetUsed(State* state, std::size_t j, bool on) {
    const std::uint64_t bit = std::uint64_t{1} << (j % 64);
    if (on) {
      state->used[j / 64] |= bit;
    } else {
      state->used[j / 64] &= ~bit;
    }
  }

  std::string Key(std::size_t i, int prev, const State& state) const {
    std::string key;
    key.reserve(16 + state.used.size() * 8 +
                (state.exact_left.size() + state.stem_left.size()) * 2);
    auto put = [&key](std::uint64_t v, int bytes) {
      for (int b = 0; b < bytes; ++b) key += static_cast<char>((v >> (8 * b)) & 0xff);
    };
    put(i, 4);
    put(static_cast<std::uint32_t>(prev + 1), 4);
    for (std::uint64_t w : state.used) put(w, 8);
    for (int q : state.exact_left) put(static_cast<std::uint32_t>(q), 2);
    for (int q : state.stem_left) put(static_cast<std::uint32_t>(q), 2);
    return key;
  }

  // Can cand token `i`'s word spare this token (i.e. is it a leftover after
  // the exact stage)?
  bool CandCanBeLeftover(std::size_t i, const State& state) const {
    const int w = cand_word_[i];
    int later = 0;
    for (std::size_t k = i + 1; k < cand_.size(); ++k) later += cand_word_[k] == w;
    return later >= state.exact_left[w];
  }

  bool RefCanBeLeftover(std::size_t j, const State& state) const {
    const int w = ref_word_[j];
    int unused_other = 0;
    for (std::size_t k = 0; k < ref_.size(); ++k) {
      if (k != j && ref_word_[k] == w && !Used(state, k)) ++unused_other;
    }
    return unused_other >= state.exact_left[w];
  }

  bool Feasible(std::size_t i, const State& state) const {
    int need = 0;
    for (int q : state.exact_left) need += q;
    for (int q : state.stem_left) need += q;
    return need <= static_cast<int>(cand_.size() - i);
  }

  int Solve(std::size_t i, int prev, State& state) {
    if (i == cand_.size()) {
      for (int q : state.exact_left) if (q != 0) return kInfinity;
      for (int q : state.stem_left) if (q != 0) return kInfinity;
      return 0;
    }
    if (!Feasible(i, state)) return kInfinity;
    const std::string key = Key(i, prev, state);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.cost;
    if (memo_.size() >= kMaxStates) throw BudgetExhausted{};

    Memo best{kInfinity, -1};
    const int w = cand_word_[i];
    const int s = cand_stem_[i];
    const bool leftover = CandCanBeLeftover(i, state);
    for (std::size_t j = 0; j < ref_.size(); ++j) {
      if (Used(state, j)) continue;
      const bool exact = ref_word_[j] == w;
      if (exact) {
        if (state.exact_left[w] == 0) continue;
      } else {
        if (ref_stem_[j] != s || state.stem_left[s] == 0 || !leftover ||
            !RefCanBeLeftover(j, state)) {
          continue;
        }
      }
      const int step = (prev >= 0 && static_cast<std::size_t>(prev) + 1 == j) ? 0 : 1;
      SetUsed(&state, j, true);
      int& quota = exact ? state.exact_left[w] : state.stem_left[s];
      --quota;
      const int rest = Solve(i + 1, static_cast<int>(j), state);
      ++quota;
      SetUsed(&state, j, false);
      if (rest < kInfinity && rest + step < best.cost) {
        best = {rest + step, static_cast<int>(j)};
      }
    }
    if (leftover) {
      const int rest = Solve(i + 1, -1, state);
      if (rest < best.cost) best = {rest, -1};
    }
    memo_[key] = best;
    return best.cost;
  }

  std::vector<MeteorMatch> Reconstruct(State state) const {
    std::vector<MeteorMatch> matches;
    int prev = -1;
    for (std::size_t i = 0; i < cand_.size(); ++i) {
      const Memo& m = memo_.at(Key(i, prev, state));
      if (m.choice >= 0) {
        const auto j = static_cast<std::size_t>(m.choice);
        const bool exact = ref_word_[j] == cand_word_[i];
        matches.push_back({i, j, exact});
        SetUsed(&state, j, true);
        if (exact) {
          --state.exact_left[cand_word_[i]];
        } else {
          --state.stem_left[cand_stem_[i]];
        }
      }
      prev = m.choice;
    }
    return matches;
  }

  // Two-stage greedy: exact matches, then stem matches among leftovers, each
  // candidate token taking the leftmost free reference token. With
  // `prefer_diagonal`, the reference token right after the previous match is
  // taken first when it is eligible.
  MeteorAlignment Greedy(bool prefer_diagonal) const {
    std::vector<int> ref_of(cand_.size(), -1);
    std::vector<bool> ref_used(ref_.size(), false);
    for (int stage = 0; stage < 2; ++stage) {
      for (std::size_t i = 0; i < cand_.size(); ++i) {
        if (ref_of[i] >= 0) continue;
        auto eligible = [&](std::size_t j) {
          if (ref_used[j]) return false;
          return stage == 0 ? ref_word_[j] == cand_word_[i]
                            : ref_stem_[j] == cand_stem_[i];
        };
        int pick = -1;
        if (prefer_diagonal && i > 0 && ref_of[i - 1] >= 0) {
          const auto next = static_cast<std::size_t>(ref_of[i - 1] + 1);
          if (next < ref_.size() && eligible(next)) pick = static_cast<int>(next);
        }
        for (std::size_t j = 0; pick < 0 && j < ref_.size(); ++j) {
          if (eligible(j)) pick = static_cast<int>(j);
        }
        if (pick >= 0) {
          ref_of[i] = pick;
          ref_used[static_cast<std::size_t>(pick)] = true;
        }
      }
    }
    MeteorAlignment alignment;
    int prev = -2;
    for (std::size_t i = 0; i < cand_.size(); ++i) {
      if (ref_of[i] < 0) {
        prev = -2;
        continue;
      }
      const auto j = static_cast<std::size_t>(ref_of[i]);
      alignment.matches.push_back({i, j, ref_word_[j] == cand_word_[i]});
      if (prev + 1 != ref_of[i]) ++alignment.chunks;
      prev = ref_of[i];
    }
    return alignment;
  }

  const std::vector<std::string>& cand_;
  const std::vector<std::string>& ref_;
  std::vector<int> cand_word_, cand_stem_, ref_word_, ref_stem_, word_stem_;
  std::size_t word_count_ = 0;
  std::vector<int> exact_quota_;
  std::vector<int> stem_quota_;
  int total_matches_ = 0;
  std::unordered_map<std::string, Memo> memo_;
};

// ---------------------------------------------------------------------------
// CIDEr-D helpers.

struct TfIdf {
  std::unordered_map<std::string, double> weights;
  double norm = 0.0;
};

TfIdf Weigh(const NgramCounts& counts,
            const std::unordered_map<std::string, int>& doc_freq,
            double log_items) {
  TfIdf out;
  for (const auto& [gram, tf] : counts) {
    auto df = doc_freq.find(gram);
    const double floored = df == doc_freq.end() ? 1.0 : std::max(1.0, double(df->second));
    const double w = tf * (log_items - std::log(floored));
    out.weights.emplace(gram, w);
    out.norm += w * w;
  }
  out.norm = std::sqrt(out.norm);
  return out;
}

double CiderSimilarity(const TfIdf& hyp, const TfIdf& ref, std::size_t hyp_len,
                       std::size_t ref_len) {
  if (hyp.norm == 0.0 || ref.norm == 0.0) return 0.0;
  double dot = 0.0;
  for (const auto& [gram, h] : hyp.weights) {
    auto it = ref.weights.find(gram);
    if (it == ref.weights.end()) continue;
    dot += std::min(h, it->second) * it->second;
  }
  const double delta = static_cast<double>(hyp_len) - static_cast<double>(ref_len);
  return dot / (hyp.norm * ref.norm) *
         std::exp(-(delta * delta) / (2.0 * kCiderSigma * kCiderSigma));
}

}  // namespace

TokenizedCaption NormalizeTokenize(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (char c : text) {
    if (kStripCharacters.find(c) != std::string_view::npos) continue;
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    cleaned += c;
  }
  return Tokens(cleaned);
}

TokenizedCaption Tokens(std::string_view text) {
  TokenizedCaption caption;
  for (std::string_view piece : SplitWhitespace(text)) {
    caption.tokens.emplace_back(piece);
  }
  return caption;
}

void CorpusPair::Validate() const {
  std::set<std::string_view> ids;
  for (const CorpusItem& item : items) {
    if (!ids.insert(item.entry_id).second) {
      throw InvalidArgumentError("duplicate entry id '" + item.entry_id + "'");
    }
    if (item.references.empty()) {
      throw InvalidArgumentError("entry '" + item.entry_id +
                                 "' has no references");
    }
  }
}

double Bleu4Corpus(const CorpusPair& corpus) {
  RequireNonEmpty(corpus, "BLEU");
  std::array<double, kBleuOrder> matched{};
  std::array<double, kBleuOrder> total{};
  double cand_len = 0.0;
  double ref_len = 0.0;
  for (const CorpusItem& item : corpus.items) {
    const std::size_t c = item.candidate.size();
    cand_len += static_cast<double>(c);
    std::size_t closest = item.references.front().size();
    for (const TokenizedCaption& r : item.references) {
      const std::size_t len = r.size();
      const auto gap = [c](std::size_t l) { return l > c ? l - c : c - l; };
      if (gap(len) < gap(closest) || (gap(len) == gap(closest) && len < closest)) {
        closest = len;
      }
    }
    ref_len += static_cast<double>(closest);

    for (int n = 1; n <= kBleuOrder; ++n) {
      const NgramCounts cand = CountNgrams(item.candidate.tokens, n);
      std::unordered_map<std::string, int> max_ref;
      for (const TokenizedCaption& r : item.references) {
        for (const auto& [gram, count] : CountNgrams(r.tokens, n)) {
          int& slot = max_ref[gram];
          slot = std::max(slot, count);
        }
      }
      for (const auto& [gram, count] : cand) {
        auto it = max_ref.find(gram);
        if (it != max_ref.end()) matched[n - 1] += std::min(count, it->second);
        total[n - 1] += count;
      }
    }
  }
  double log_precision = 0.0;
  for (int n = 0; n < kBleuOrder; ++n) {
    if (total[n] == 0.0 || matched[n] == 0.0) return 0.0;
    log_precision += std::log(matched[n] / total[n]) / kBleuOrder;
  }
  const double brevity = cand_len > ref_len ? 1.0 : std::exp(1.0 - ref_len / cand_len);
  return brevity * std::exp(log_precision);
}

std::size_t LcsLength(const std::vector<std::string>& a,
                      const std::vector<std::string>& b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diagonal + 1 : std::max(row[j], row[j - 1]);
      diagonal = above;
    }
  }
  return row[b.size()];
}

double RougeLItem(const TokenizedCaption& candidate,
                  const TokenizedCaption& reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const std::size_t lcs = LcsLength(candidate.tokens, reference.tokens);
  if (lcs == 0) return 0.0;
  const double recall = static_cast<double>(lcs) / reference.size();
  const double precision = static_cast<double>(lcs) / candidate.size();
  const double beta2 = kRougeBeta * kRougeBeta;
  return ((1.0 + beta2) * recall * precision) / (recall + beta2 * precision);
}

double RougeLCorpus(const CorpusPair& corpus) {
  RequireNonEmpty(corpus, "ROUGE-L");
  double sum = 0.0;
  for (const CorpusItem& item : corpus.items) {
    double best = 0.0;
    for (const auto& r : item.references) best = std::max(best, RougeLItem(item.candidate, r));
    sum += best;
  }
  return sum / static_cast<double>(corpus.items.size());
}

MeteorAlignment MeteorAlign(const TokenizedCaption& candidate,
                            const TokenizedCaption& reference) {
  return MeteorAligner(candidate, reference).Align();
}

double MeteorItem(const TokenizedCaption& candidate,
                  const TokenizedCaption& reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const MeteorAlignment alignment = MeteorAlign(candidate, reference);
  const double m = static_cast<double>(alignment.matches.size());
  if (m == 0.0) return 0.0;
  const double precision = m / candidate.size();
  const double recall = m / reference.size();
  const double f_mean = precision * recall /
                        (kMeteorAlpha * precision + (1.0 - kMeteorAlpha) * recall);
  const double penalty =
      kMeteorGamma * std::pow(static_cast<double>(alignment.chunks) / m, kMeteorBeta);
  return f_mean * (1.0 - penalty);
}

double MeteorCorpus(const CorpusPair& corpus) {
  RequireNonEmpty(corpus, "METEOR");
  double sum = 0.0;
  for (const CorpusItem& item : corpus.items) {
    double best = 0.0;
    for (const auto& r : item.references) best = std::max(best, MeteorItem(item.candidate, r));
    sum += best;
  }
  return sum / static_cast<double>(corpus.items.size());
}

std::vector<double> CiderDItems(const CorpusPair& corpus) {
  corpus.Validate();
  if (corpus.items.size() < 2) {
    throw InvalidArgumentError("CIDEr-D needs at least two items");
  }
  const std::size_t items = corpus.items.size();
  // counts[item][n-1] for the candidate, ref_counts[item][ref][n-1].
  std::vector<std::array<NgramCounts, kCiderOrder>> cand_counts(items);
  std::vector<std::vector<std::array<NgramCounts, kCiderOrder>>> ref_counts(items);
  std::unordered_map<std::string, int> doc_freq;
  for (std::size_t i = 0; i < items; ++i) {
    const CorpusItem& item = corpus.items[i];
    std::set<std::string> present;
    for (int n = 1; n <= kCiderOrder; ++n) {
      cand_counts[i][n - 1] = CountNgrams(item.candidate.tokens, n);
    }
    for (const TokenizedCaption& r : item.references) {
      auto& per_n = ref_counts[i].emplace_back();
      for (int n = 1; n <= kCiderOrder; ++n) {
        per_n[n - 1] = CountNgrams(r.tokens, n);
        for (const auto& entry : per_n[n - 1]) present.insert(entry.first);
      }
    }
    for (const std::string& gram : present) ++doc_freq[gram];
  }

  const double log_items = std::log(static_cast<double>(items));
  std::vector<double> scores(items, 0.0);
  for (std::size_t i = 0; i < items; ++i) {
    const CorpusItem& item = corpus.items[i];
    double total = 0.0;
    for (int n = 0; n < kCiderOrder; ++n) {
      const TfIdf hyp = Weigh(cand_counts[i][n], doc_freq, log_items);
      double sum = 0.0;
      for (std::size_t r = 0; r < item.references.size(); ++r) {
        const TfIdf ref = Weigh(ref_counts[i][r][n], doc_freq, log_items);
        sum += CiderSimilarity(hyp, ref, item.candidate.size(),
                               item.references[r].size());
      }
      total += sum / static_cast<double>(item.references.size());
    }
    scores[i] = total / kCiderOrder;
  }
  return scores;
}

double CiderDCorpus(const CorpusPair& corpus) {
  const std::vector<double> scores = CiderDItems(corpus);
  return std::accumulate(scores.begin(), scores.end(), 0.0) /
         static_cast<double>(scores.size());
}

}  // namespace shotcap::metrics
