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


// Slow, direct implementations used only to cross-check the library. They
// deliberately avoid the library's data structures and search orders.

#ifndef SHOTCAP_TESTS_ORACLES_ORACLES_H_
#define SHOTCAP_TESTS_ORACLES_ORACLES_H_

#include <string>
#include <vector>

namespace shotcap::oracle {

using Sentence = std::vector<std::string>;

struct Item {
  Sentence candidate;
  std::vector<Sentence> references;
};

double Bleu4(const std::vector<Item>& corpus);
double RougeL(const Sentence& candidate, const Sentence& reference);
double RougeLCorpus(const std::vector<Item>& corpus);

// Match count from a literal two-stage greedy pass and the fewest chunks over
// every alignment with the same per-stage structure.
struct MeteorStats {
  int matches = 0;
  int chunks = 0;
};
MeteorStats MeteorStatsFor(const Sentence& candidate, const Sentence& reference);
double Meteor(const Sentence& candidate, const Sentence& reference);
double MeteorCorpus(const std::vector<Item>& corpus);

double CiderD(const std::vector<Item>& corpus);

// Indices kept by nucleus filtering, found by scanning every prefix of the
// sorted order. Zero-probability tokens are never reported.
std::vector<int> TopPKept(const std::vector<double>& probs, double p);

// Tokens whose addition repeats an n-gram, by appending each and rescanning.
std::vector<int> NoRepeatBanned(const std::vector<int>& history, int n,
                                int vocab_size);

}  // namespace shotcap::oracle

#endif  // SHOTCAP_TESTS_ORACLES_ORACLES_H_
