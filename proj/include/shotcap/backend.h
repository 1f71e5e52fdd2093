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


#ifndef SHOTCAP_BACKEND_H_
#define SHOTCAP_BACKEND_H_

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "shotcap/decoding.h"
#include "shotcap/json_lines.h"
#include "shotcap/sampling.h"

namespace shotcap::harness {

enum class BackendKind { kMock, kSubprocess, kNetwork };

const char* BackendKindName(BackendKind kind);
BackendKind ParseBackendKind(std::string_view name);

inline constexpr double kDefaultTimeoutSeconds = 60.0;
inline constexpr int kDefaultMaxInFlight = 4;

struct BackendDescriptor {
  BackendKind kind = BackendKind::kMock;
  // Shell command for subprocess backends, URL for network backends.
  std::string endpoint;
  double timeout_seconds = kDefaultTimeoutSeconds;
  int max_in_flight = kDefaultMaxInFlight;

  // Throws ConfigError.
  void Validate() const;
  std::chrono::milliseconds timeout() const;
};

struct GenerationRequest {
  std::string entry_id;
  std::string prompt;
  sampling::FramePlan plan;
  std::vector<std::filesystem::path> frame_paths;  // empty unless extracted
  decoding::GenerationConfig config;
};

// The wire object: {entry_id, prompt, frames, config}. `frames` carries the
// plan and, when present, the extracted frame paths.
Json RequestToJson(const GenerationRequest& request);

struct GenerationResult {
  std::string entry_id;
  std::string text;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

// Failure reasons recorded per entry.
inline constexpr char kTimeoutFailure[] = "timeout";
inline constexpr char kBackendExited[] = "backend_exited";
inline constexpr char kProtocolFailure[] = "protocol_error";

// Implementations are safe to call from several threads at once.
class Backend {
 public:
  virtual ~Backend() = default;

  // Checks the backend can be reached; throws BackendError otherwise.
  virtual void Start() {}
  virtual GenerationResult Generate(const GenerationRequest& request) = 0;
  // Releases child processes and connections.
  virtual void Stop() {}
};

std::unique_ptr<Backend> MakeBackend(const BackendDescriptor& descriptor);

// Parses a backend reply line/body. Returns a protocol failure result rather
// than throwing.
GenerationResult ParseReply(std::string_view text, std::string_view entry_id);

}  // namespace shotcap::harness

#endif  // SHOTCAP_BACKEND_H_
