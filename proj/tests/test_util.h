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


#ifndef SHOTCAP_TESTS_TEST_UTIL_H_
#define SHOTCAP_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <random>
#include <string>

#include "gtest/gtest.h"
#include "shotcap/json_lines.h"

namespace shotcap::testing {

inline std::filesystem::path DataPath(const std::string& name) {
  return std::filesystem::path(SHOTCAP_TEST_DATA_DIR) / name;
}

inline std::string ReadData(const std::string& name) {
  return ReadTextFile(DataPath(name));
}

// A fresh directory under the system temp dir, named after the running test.
inline std::filesystem::path ScratchDir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  std::string name = "shotcap_";
  if (info != nullptr) {
    name += std::string(info->test_suite_name()) + "_" + info->name();
  }
  for (char& c : name) {
    if (c == '/') c = '_';
  }
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace shotcap::testing

#endif  // SHOTCAP_TESTS_TEST_UTIL_H_
