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
#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oracles/oracles.h"
#include "shotcap/error.h"

namespace shotcap::metrics {
namespace {

// Words chosen so that several share a Porter stem.
const std::vector<std::string> kWords = {"run",  "runs",  "running", "cat",   "cats",
                                         "jump", "jumped", "the",    "a",     "dog",
                                         "dogs", "walk",  "walked",  "walking"};

TokenizedCaption Caption(std::mt19937_64& rng, int vocab, int max_len) {
  TokenizedCaption c;
  const int len = rng() % (max_len + 1);
  for (int i = 0; i < len; ++i) c.tokens.push_back(kWords[rng() % vocab]);
  return c;
}

CorpusPair RandomCorpus(std::mt19937_64& rng, int min_items = 1) {
  CorpusPair corpus;
  const int vocab = 1 + rng() % 10;
  const int items = min_items + rng() % (9 - min_items);
  for (int i = 0; i < items; ++i) {
    CorpusItem item;
    item.entry_id = "e" + std::to_string(i);
    item.candidate = Caption(rng, vocab, 12);
    const int refs = 1 + rng() % 3;
    for (int r = 0; r < refs; ++r) item.references.push_back(Caption(rng, vocab, 12));
    corpus.items.push_back(std::move(item));
  }
  return corpus;
}

std::vector<oracle::Item> ToOracle(const CorpusPair& corpus) {
  std::vector<oracle::Item> out;
  for (const auto& item : corpus.items) {
    oracle::Item o;
    o.candidate = item.candidate.tokens;
    for (const auto& r : item.references) o.references.push_back(r.tokens);
    out.push_back(std::move(o));
  }
  return out;
}

CorpusPair Single(const std::string& candidate, const std::string& reference) {
  CorpusPair corpus;
  corpus.items.push_back({"x", NormalizeTokenize(candidate), {NormalizeTokenize(reference)}});
  return corpus;
}

TEST(TokenizeTest, Examples) {
  EXPECT_EQ(NormalizeTokenize("The cat, sat.").tokens,
            (std::vector<std::string>{"the", "cat", "sat"}));
  EXPECT_TRUE(NormalizeTokenize("").empty());
  EXPECT_EQ(NormalizeTokenize("Don't stop").tokens,
            (std::vector<std::string>{"dont", "stop"}));
  EXPECT_EQ(NormalizeTokenize(" (Well-known)  [fact]!\n").tokens,
            (std::vector<std::string>{"wellknown", "fact"}));
}

TEST(TokenizeTest, Idempotent) {
  std::mt19937_64 rng(8);
  const std::string alphabet = "aBc .,!?;:\"'()[]-\tXyZ";
  for (int t = 0; t < 300; ++t) {
    std::string text;
    for (int i = rng() % 40; i > 0; --i) text += alphabet[rng() % alphabet.size()];
    const auto once = NormalizeTokenize(text);
    std::string joined;
    for (const auto& tok : once.tokens) joined += (joined.empty() ? "" : " ") + tok;
    EXPECT_EQ(NormalizeTokenize(joined), once);
    for (const auto& tok : once.tokens) {
      EXPECT_EQ(tok.find_first_of(std::string(kStripCharacters) + " \t\n"), std::string::npos);
    }
  }
}

TEST(BleuTest, Examples) {
  EXPECT_DOUBLE_EQ(Bleu4Corpus(Single("a b c d e", "a b c d e")), 1.0);
  EXPECT_EQ(Bleu4Corpus(Single("the the the the", "the cat")), 0.0);
  EXPECT_NEAR(Bleu4Corpus(Single("a b c d", "a b c d e")), std::exp(-0.25), 1e-12);
  EXPECT_THROW(Bleu4Corpus(CorpusPair{}), InvalidArgumentError);
}

TEST(BleuTest, ClosestReferenceLengthTiesGoShorter) {
  CorpusPair corpus;
  // Candidate length 5; references of length 4 and 6 are equally close. The
  // shorter one sets the effective length, so there is no brevity penalty.
  corpus.items.push_back({"x", Tokens("a b c d e"), {Tokens("a b c d e f"), Tokens("a b c d")}});
  EXPECT_DOUBLE_EQ(Bleu4Corpus(corpus), oracle::Bleu4(ToOracle(corpus)));
  EXPECT_EQ(Bleu4Corpus(corpus), 1.0);
}

TEST(RougeTest, Examples) {
  EXPECT_DOUBLE_EQ(RougeLItem(Tokens("a b c"), Tokens("a b c")), 1.0);
  EXPECT_NEAR(RougeLItem(Tokens("a b c"), Tokens("a c")), 0.8299, 1e-4);
  EXPECT_NEAR(RougeLItem(Tokens("a b c"), Tokens("a c")),
              (2.44 * (2.0 / 3.0)) / (1 + 1.44 * (2.0 / 3.0)), 1e-12);
  EXPECT_EQ(RougeLItem(Tokens("a b"), Tokens("c d")), 0.0);
  EXPECT_EQ(RougeLItem(Tokens(""), Tokens("c d")), 0.0);
  EXPECT_EQ(LcsLength(Tokens("a b c b d a b").tokens, Tokens("b d c a b a").tokens), 4u);
}

TEST(MeteorTest, Examples) {
  EXPECT_EQ(MeteorItem(Tokens("a b c d"), Tokens("a b c d")), 0.9921875);
  EXPECT_EQ(MeteorItem(Tokens("the cat"), Tokens("the dog")), 0.25);
  EXPECT_EQ(MeteorItem(Tokens("a b"), Tokens("c d")), 0.0);
  EXPECT_EQ(MeteorItem(Tokens(""), Tokens("c d")), 0.0);
}

TEST(MeteorTest, StemStageMatchesLeftovers) {
  const auto alignment = MeteorAlign(Tokens("dogs running"), Tokens("dog runs"));
  ASSERT_EQ(alignment.matches.size(), 2u);
  EXPECT_FALSE(alignment.matches[0].exact);
  EXPECT_EQ(alignment.chunks, 1u);
  // An exact match is preferred over a stem match for the same token.
  const auto exact = MeteorAlign(Tokens("runs"), Tokens("run runs"));
  ASSERT_EQ(exact.matches.size(), 1u);
  EXPECT_TRUE(exact.matches[0].exact);
  EXPECT_EQ(exact.matches[0].reference_index, 1u);
}

TEST(MeteorTest, ChunksAreMinimalNotLeftmost) {
  // Leftmost-first pairs "b" with reference position 0 and splits the run;
  // the minimal alignment keeps "a b" together at positions 1 and 2.
  const auto alignment = MeteorAlign(Tokens("a b"), Tokens("b a b"));
  EXPECT_EQ(alignment.matches.size(), 2u);
  EXPECT_EQ(alignment.chunks, 1u);
  EXPECT_TRUE(alignment.chunks_exact);
  EXPECT_EQ(alignment.matches[1].reference_index, 2u);
}

TEST(MeteorTest, IdentityClosedForm) {
  for (int m = 1; m <= 30; ++m) {
    TokenizedCaption c;
    for (int i = 0; i < m; ++i) c.tokens.push_back("w" + std::to_string(i % 7));
    EXPECT_NEAR(MeteorItem(c, c), 1.0 - 0.5 / (double(m) * m * m), 1e-12) << m;
  }
}

TEST(MeteorTest, LongCaptionsStayFast) {
  TokenizedCaption a, b;
  for (int i = 0; i < 200; ++i) {
    a.tokens.push_back(i % 3 ? "the" : "cat" + std::to_string(i % 11));
    b.tokens.push_back(i % 4 ? "the" : "cat" + std::to_string(i % 13));
  }
  const auto alignment = MeteorAlign(a, b);
  EXPECT_GT(alignment.matches.size(), 100u);
  const double score = MeteorItem(a, b);
  EXPECT_GE(score, 0.0);
  EXPECT_LE(score, 1.0);
}

TEST(CiderTest, Examples) {
  CorpusPair disjoint;
  disjoint.items.push_back({"x", Tokens("a b c d e"), {Tokens("a b c d e")}});
  disjoint.items.push_back({"y", Tokens("f g h i"), {Tokens("f g h i")}});
  EXPECT_NEAR(CiderDCorpus(disjoint), 1.0, 1e-12);

  CorpusPair shared;
  shared.items.push_back({"x", Tokens("a b c"), {Tokens("a b c")}});
  shared.items.push_back({"y", Tokens("a b c"), {Tokens("a b c")}});
  EXPECT_EQ(CiderDCorpus(shared), 0.0);

  CorpusPair miss;
  miss.items.push_back({"x", Tokens("p q"), {Tokens("a b c")}});
  miss.items.push_back({"y", Tokens("f g"), {Tokens("f g")}});
  EXPECT_EQ(CiderDItems(miss)[0], 0.0);

  CorpusPair one;
  one.items.push_back({"x", Tokens("a"), {Tokens("a")}});
  EXPECT_THROW(CiderDCorpus(one), InvalidArgumentError);
}

TEST(CorpusPairTest, Validation) {
  CorpusPair dupes;
  dupes.items.push_back({"x", Tokens("a"), {Tokens("a")}});
  dupes.items.push_back({"x", Tokens("a"), {Tokens("a")}});
  EXPECT_THROW(dupes.Validate(), InvalidArgumentError);
  CorpusPair norefs;
  norefs.items.push_back({"x", Tokens("a"), {}});
  EXPECT_THROW(norefs.Validate(), InvalidArgumentError);
}

TEST(MetricOracleTest, RandomCorporaMatch) {
  std::mt19937_64 rng(2026);
  for (int t = 0; t < 300; ++t) {
    const CorpusPair corpus = RandomCorpus(rng, 2);
    const auto items = ToOracle(corpus);
    EXPECT_NEAR(Bleu4Corpus(corpus), oracle::Bleu4(items), 1e-9) << t;
    EXPECT_NEAR(RougeLCorpus(corpus), oracle::RougeLCorpus(items), 1e-9) << t;
    EXPECT_NEAR(MeteorCorpus(corpus), oracle::MeteorCorpus(items), 1e-9) << t;
    EXPECT_NEAR(CiderDCorpus(corpus), oracle::CiderD(items), 1e-9) << t;
  }
}

TEST(MetricOracleTest, MeteorChunksMatchExhaustiveSearch) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 2000; ++t) {
    const int vocab = 1 + rng() % 10;
    const auto c = Caption(rng, vocab, 12);
    const auto r = Caption(rng, vocab, 12);
    const auto alignment = MeteorAlign(c, r);
    const auto expected = oracle::MeteorStatsFor(c.tokens, r.tokens);
    ASSERT_EQ(static_cast<int>(alignment.matches.size()), expected.matches) << t;
    EXPECT_EQ(static_cast<int>(alignment.chunks), expected.chunks) << t;
    EXPECT_TRUE(alignment.chunks_exact);
  }
}

TEST(MetricPropertyTest, RangeAndPermutationInvariance) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    CorpusPair corpus = RandomCorpus(rng, 2);
    const double bleu = Bleu4Corpus(corpus), rouge = RougeLCorpus(corpus);
    const double meteor = MeteorCorpus(corpus), cider = CiderDCorpus(corpus);
    for (double v : {bleu, rouge, meteor, cider}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0 + 1e-12);
    }
    std::shuffle(corpus.items.begin(), corpus.items.end(), rng);
    EXPECT_NEAR(Bleu4Corpus(corpus), bleu, 1e-12);
    EXPECT_NEAR(RougeLCorpus(corpus), rouge, 1e-12);
    EXPECT_NEAR(MeteorCorpus(corpus), meteor, 1e-12);
    EXPECT_NEAR(CiderDCorpus(corpus), cider, 1e-12);
  }
}

}  // namespace
}  // namespace shotcap::metrics
