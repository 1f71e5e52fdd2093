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

#ifndef SHOTCAP_TEXT_H_
#define SHOTCAP_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace shotcap {

// Splits on runs of ASCII whitespace; never yields empty pieces.
std::vector<std::string_view> SplitWhitespace(std::string_view text);

std::size_t CountWhitespaceTokens(std::string_view text);

std::string JoinTokens(const std::vector<std::string_view>& tokens,
                       std::size_t count);

bool IsBlank(std::string_view text);

// 64-bit FNV-1a. Used wherever a digest must be stable across platforms.
std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

std::string HexDigest(std::uint64_t value);

}  // namespace shotcap

#endif  // SHOTCAP_TEXT_H_
