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

#ifndef SHOTCAP_STEMMER_H_
#define SHOTCAP_STEMMER_H_

#include <string>
#include <string_view>

namespace shotcap::metrics {

// The Porter (1980) suffix-stripping stemmer, as published. Expects a
// lowercase word; other characters are treated as consonants.
std::string PorterStem(std::string_view word);

}  // namespace shotcap::metrics

#endif  // SHOTCAP_STEMMER_H_
