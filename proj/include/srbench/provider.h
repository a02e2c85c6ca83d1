// Copyright 2026 The srbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Out-of-process metric providers.
//
// A provider is a child process speaking line-delimited JSON on its standard
// input/output. The wire format is described in docs/provider-protocol.md.
// A session carries one request at a time; run several sessions for
// parallelism.

#ifndef SRBENCH_PROVIDER_H_
#define SRBENCH_PROVIDER_H_

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "srbench/errors.h"
#include "srbench/metric.h"

namespace srbench {

inline constexpr int kProviderProtocolVersion = 1;

struct ProviderDescriptor {
  std::string name;
  std::vector<std::string> command;  // argv[0] is looked up on PATH
  std::set<Metric> metrics;
  int timeout_seconds = 300;

  // Non-empty command, non-empty provider-metric set, positive timeout.
  void validate() const;
};

// Parses a JSON array of descriptors:
//   [{"name": "...", "command": ["..."], "metrics": ["lpips"],
//     "timeout_seconds": 300}]
std::vector<ProviderDescriptor> parse_provider_descriptors(
    const nlohmann::json& doc);
std::vector<ProviderDescriptor> load_provider_descriptors(
    const std::filesystem::path& path);

enum class FrameType { kHello, kCapabilities, kEvaluate, kResult, kError, kShutdown };

std::string_view frame_type_name(FrameType t);

struct ProviderFrame {
  FrameType type = FrameType::kHello;
  std::int64_t id = 0;
  std::optional<int> protocol;                    // hello, capabilities
  std::vector<std::string> metric_list;           // capabilities ("metric")
  std::optional<std::string> metric;              // evaluate, result
  std::optional<std::string> sr;                  // evaluate
  std::optional<std::string> hr;                  // evaluate (full-reference)
  std::optional<double> value;                    // result
  std::optional<std::string> message;             // error
  nlohmann::json meta;                            // optional extension object

  bool operator==(const ProviderFrame&) const = default;
};

// One JSON object, no trailing newline.
std::string encode_frame(const ProviderFrame& frame);

// Throws ProviderError(kProtocolViolation) for malformed lines. A bare NaN
// or Infinity in "value" is reported as a non-finite value.
ProviderFrame decode_frame(std::string_view line);

enum class ProviderErrc {
  kSpawn,               // command could not be started
  kHandshake,           // no valid capabilities frame (exit or timeout)
  kCapabilityMismatch,  // a requested metric is not advertised
  kPrecondition,        // caller error, detected before any frame is sent
  kTimeout,             // no answer within the deadline or provider exited
  kProviderError,       // provider answered with an error frame
  kProtocolViolation,   // malformed frame, id mismatch, non-finite value
  kSessionDead,         // request on a session that already failed
};

class ProviderError : public Error {
 public:
  ProviderError(ProviderErrc code, const std::string& what)
      : Error(what), code_(code) {}
  ProviderErrc code() const { return code_; }

 private:
  ProviderErrc code_;
};

struct SessionOptions {
  // Overrides the descriptor timeout for the handshake when set.
  std::optional<std::chrono::milliseconds> handshake_timeout;
  std::chrono::milliseconds shutdown_grace{5000};
};

class ProviderSession {
 public:
  // Starts the command, sends hello and waits for capabilities. The session
  // serves requested ∩ advertised metrics.
  static ProviderSession spawn_and_handshake(const ProviderDescriptor& desc,
                                             const SessionOptions& options = {});

  ProviderSession(ProviderSession&& other) noexcept;
  ProviderSession& operator=(ProviderSession&& other) noexcept;
  ProviderSession(const ProviderSession&) = delete;
  ProviderSession& operator=(const ProviderSession&) = delete;
  ~ProviderSession();

  // Full-reference metrics require `hr`; no-reference metrics reject it.
  double evaluate(Metric metric, const std::filesystem::path& sr,
                  const std::optional<std::filesystem::path>& hr = std::nullopt);

  // Sends shutdown when live, waits up to the grace period, then kills.
  // Safe to call repeatedly.
  void shutdown();

  bool alive() const { return alive_; }
  const std::set<Metric>& metrics() const { return metrics_; }
  const std::string& name() const { return name_; }
  // Metadata object of the most recent result frame, if any.
  const nlohmann::json& last_meta() const { return last_meta_; }
  // Exit status once reaped: exit code, or 128 + signal.
  std::optional<int> exit_status() const { return exit_status_; }

 private:
  ProviderSession() = default;

  void send(const ProviderFrame& frame);
  ProviderFrame receive(std::chrono::milliseconds timeout, ProviderErrc on_silence);
  void kill_and_reap();
  bool try_reap();
  [[noreturn]] void fail(ProviderErrc code, const std::string& what);

  std::string name_;
  pid_t pid_ = -1;
  int fd_ = -1;
  bool alive_ = false;
  std::int64_t next_id_ = 1;
  std::set<Metric> metrics_;
  std::chrono::milliseconds timeout_{0};
  std::chrono::milliseconds shutdown_grace_{5000};
  std::string buffer_;
  nlohmann::json last_meta_;
  std::optional<int> exit_status_;
};

// Routes metrics to descriptors and lazily opens one session per
// descriptor. Not thread-safe; give each worker its own instance.
class ProviderPool {
 public:
  explicit ProviderPool(std::vector<ProviderDescriptor> descriptors,
                        SessionOptions options = {});
  ~ProviderPool();

  // Metrics some descriptor claims to serve.
  std::set<Metric> routable_metrics() const;

  // Throws ProviderError. A descriptor whose session died stays failed for
  // the lifetime of the pool (kSessionDead on later requests).
  double evaluate(Metric metric, const std::filesystem::path& sr,
                  const std::optional<std::filesystem::path>& hr);

  // Result-frame metadata per metric, from the latest answers.
  const std::map<Metric, nlohmann::json>& metadata() const { return meta_; }

  void shutdown_all();

 private:
  std::vector<ProviderDescriptor> descriptors_;
  SessionOptions options_;
  std::map<Metric, std::size_t> route_;
  std::map<std::size_t, std::unique_ptr<ProviderSession>> sessions_;
  std::set<std::size_t> failed_;
  std::map<Metric, nlohmann::json> meta_;
};

}  // namespace srbench

#endif  // SRBENCH_PROVIDER_H_
