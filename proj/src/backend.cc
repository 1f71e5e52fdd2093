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


#include "shotcap/backend.h"

#include <cmath>
#include <mutex>
#include <regex>
#include <string>
#include <utility>

#include "httplib.h"
#include "shotcap/error.h"
#include "shotcap/process.h"

namespace shotcap::harness {
namespace {

constexpr std::chrono::milliseconds kShutdownGrace{2000};

struct Url {
  std::string host;
  int port = 80;
  std::string path = "/";
};

Url ParseHttpUrl(const std::string& url) {
  static const std::regex kPattern(R"(^http://([A-Za-z0-9.\-]+)(?::(\d{1,5}))?(/[^\s]*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, kPattern)) {
    if (url.rfind("https://", 0) == 0) {
      throw ConfigError("network backend '" + url +
                        "': only plain http endpoints are supported");
    }
    throw ConfigError("network backend needs a URL of the form "
                      "http://host[:port][/path], got '" + url + "'");
  }
  Url out;
  out.host = m[1];
  if (m[2].matched) {
    out.port = std::stoi(m[2]);
    if (out.port < 1 || out.port > 65535) {
      throw ConfigError("network backend port out of range in '" + url + "'");
    }
  }
  if (m[3].matched) out.path = m[3];
  return out;
}

class MockBackend : public Backend {
 public:
  GenerationResult Generate(const GenerationRequest& request) override {
    return {request.entry_id, decoding::GenerateMock(request.prompt, request.config), ""};
  }
};

// A pool of line-protocol children, each serving one request at a time. A
// child that times out or misbehaves is discarded so it cannot affect other
// entries; the next request spawns a fresh one.
class SubprocessBackend : public Backend {
 public:
  explicit SubprocessBackend(BackendDescriptor descriptor)
      : descriptor_(std::move(descriptor)) {}

  ~SubprocessBackend() override { Stop(); }

  void Start() override {
    const std::string program = process::CommandProgram(descriptor_.endpoint);
    if (!process::FindExecutable(program)) {
      throw BackendError("subprocess backend program '" + program +
                         "' not found");
    }
    auto child = process::LineProcess::Spawn(descriptor_.endpoint);
    Release(std::move(child));
  }

  GenerationResult Generate(const GenerationRequest& request) override {
    GenerationResult result{request.entry_id, "", ""};
    std::unique_ptr<process::LineProcess> child = Acquire();
    if (!child->WriteLine(RequestToJson(request).dump())) {
      child->CloseAndWait(std::chrono::milliseconds::zero());
      result.error = kBackendExited;
      return result;
    }
    std::string line;
    switch (child->ReadLine(&line, descriptor_.timeout())) {
      case process::LineProcess::ReadStatus::kLine:
        result = ParseReply(line, request.entry_id);
        if (result.error == kProtocolFailure) {
          child->CloseAndWait(std::chrono::milliseconds::zero());
        } else {
          Release(std::move(child));
        }
        return result;
      case process::LineProcess::ReadStatus::kTimeout:
        child->CloseAndWait(std::chrono::milliseconds::zero());
        result.error = kTimeoutFailure;
        return result;
      case process::LineProcess::ReadStatus::kEof:
        child->CloseAndWait(std::chrono::milliseconds::zero());
        result.error = kBackendExited;
        return result;
    }
    return result;
  }

  void Stop() override {
    std::vector<std::unique_ptr<process::LineProcess>> idle;
    {
      std::lock_guard<std::mutex> lock(mu_);
      idle.swap(idle_);
    }
    for (auto& child : idle) child->CloseAndWait(kShutdownGrace);
  }

 private:
  std::unique_ptr<process::LineProcess> Acquire() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (!idle_.empty()) {
        auto child = std::move(idle_.back());
        idle_.pop_back();
        return child;
      }
    }
    return process::LineProcess::Spawn(descriptor_.endpoint);
  }

  void Release(std::unique_ptr<process::LineProcess> child) {
    std::lock_guard<std::mutex> lock(mu_);
    idle_.push_back(std::move(child));
  }

  BackendDescriptor descriptor_;
  std::mutex mu_;
  std::vector<std::unique_ptr<process::LineProcess>> idle_;
};

class NetworkBackend : public Backend {
 public:
  explicit NetworkBackend(BackendDescriptor descriptor)
      : descriptor_(std::move(descriptor)), url_(ParseHttpUrl(descriptor_.endpoint)) {}

  void Start() override {
    httplib::Client client = MakeClient();
    // Any HTTP answer, even an error status, shows the server is up.
    if (!client.Get(url_.path)) {
      throw BackendError("network backend " + descriptor_.endpoint +
                         " is unreachable");
    }
  }

  GenerationResult Generate(const GenerationRequest& request) override {
    httplib::Client client = MakeClient();
    auto response = client.Post(url_.path, RequestToJson(request).dump(),
                                "application/json");
    if (!response) {
      const bool timed_out = response.error() == httplib::Error::Read ||
                             response.error() == httplib::Error::ConnectionTimeout;
      return {request.entry_id, "", timed_out ? kTimeoutFailure : kBackendExited};
    }
    if (response->status != 200) {
      return {request.entry_id, "", "http_status_" + std::to_string(response->status)};
    }
    return ParseReply(response->body, request.entry_id);
  }

 private:
  httplib::Client MakeClient() const {
    httplib::Client client(url_.host, url_.port);
    client.set_connection_timeout(descriptor_.timeout());
    client.set_read_timeout(descriptor_.timeout());
    client.set_write_timeout(descriptor_.timeout());
    return client;
  }

  BackendDescriptor descriptor_;
  Url url_;
};

}  // namespace

const char* BackendKindName(BackendKind kind) {
  switch (kind) {
    case BackendKind::kMock:
      return "mock";
    case BackendKind::kSubprocess:
      return "subprocess";
    case BackendKind::kNetwork:
      return "network";
  }
  return "unknown";
}

BackendKind ParseBackendKind(std::string_view name) {
  if (name == "mock") return BackendKind::kMock;
  if (name == "subprocess") return BackendKind::kSubprocess;
  if (name == "network") return BackendKind::kNetwork;
  throw ConfigError("unknown backend kind '" + std::string(name) +
                    "' (expected mock, subprocess or network)");
}

void BackendDescriptor::Validate() const {
  if (!(timeout_seconds > 0.0) || !std::isfinite(timeout_seconds)) {
    throw ConfigError("backend timeout must be a positive number of seconds");
  }
  if (max_in_flight < 1) {
    throw ConfigError("backend max_in_flight must be at least 1");
  }
  switch (kind) {
    case BackendKind::kMock:
      break;
    case BackendKind::kSubprocess:
      if (process::CommandProgram(endpoint).empty()) {
        throw ConfigError("subprocess backend needs a command");
      }
      break;
    case BackendKind::kNetwork:
      ParseHttpUrl(endpoint);
      break;
  }
}

std::chrono::milliseconds BackendDescriptor::timeout() const {
  return std::chrono::milliseconds(
      static_cast<long long>(std::ceil(timeout_seconds * 1000.0)));
}

Json RequestToJson(const GenerationRequest& request) {
  Json frames = sampling::PlanToJson(request.plan);
  if (!request.frame_paths.empty()) {
    Json paths = Json::array();
    for (const auto& p : request.frame_paths) paths.push_back(p.string());
    frames["paths"] = std::move(paths);
  }
  const decoding::GenerationConfig& c = request.config;
  return Json{{"entry_id", request.entry_id},
              {"prompt", request.prompt},
              {"frames", std::move(frames)},
              {"config",
               {{"temperature", c.temperature},
                {"top_p", c.top_p},
                {"no_repeat_ngram_size", c.no_repeat_ngram_size},
                {"max_new_tokens", c.max_new_tokens},
                {"seed", c.seed}}}};
}

GenerationResult ParseReply(std::string_view text, std::string_view entry_id) {
  GenerationResult result{std::string(entry_id), "", ""};
  const Json reply = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!reply.is_object()) {
    result.error = kProtocolFailure;
    return result;
  }
  if (auto id = reply.find("entry_id");
      id != reply.end() && (!id->is_string() || id->get<std::string>() != entry_id)) {
    result.error = kProtocolFailure;
    return result;
  }
  if (auto error = reply.find("error"); error != reply.end() && !error->is_null()) {
    result.error = error->is_string() ? error->get<std::string>() : error->dump();
    if (result.error.empty()) result.error = "backend_error";
    return result;
  }
  auto body = reply.find("text");
  if (body == reply.end() || !body->is_string()) {
    result.error = kProtocolFailure;
    return result;
  }
  result.text = body->get<std::string>();
  return result;
}

std::unique_ptr<Backend> MakeBackend(const BackendDescriptor& descriptor) {
  descriptor.Validate();
  switch (descriptor.kind) {
    case BackendKind::kSubprocess:
      return std::make_unique<SubprocessBackend>(descriptor);
    case BackendKind::kNetwork:
      return std::make_unique<NetworkBackend>(descriptor);
    case BackendKind::kMock:
      break;
  }
  return std::make_unique<MockBackend>();
}

}  // namespace shotcap::harness
