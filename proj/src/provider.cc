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

#include "srbench/provider.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>
#include <utility>

extern char** environ;

namespace srbench {
namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;
using nlohmann::ordered_json;

// Placeholder for bare NaN/Infinity tokens, which JSON cannot carry.
constexpr std::string_view kNonFiniteMarker = "\x01non-finite";

[[noreturn]] void violation(const std::string& what) {
  throw ProviderError(ProviderErrc::kProtocolViolation, "protocol violation: " + what);
}

std::string replace_non_finite_tokens(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      out.push_back(c);
      if (c == '\\' && i + 1 < line.size()) {
        out.push_back(line[++i]);
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      continue;
    }
    for (std::string_view token : {"-Infinity", "Infinity", "NaN"}) {
      if (line.substr(i, token.size()) == token) {
        out += "\"\\u0001non-finite\"";
        i += token.size() - 1;
        goto next;
      }
    }
    out.push_back(c);
  next:;
  }
  return out;
}

std::optional<FrameType> parse_frame_type(std::string_view s) {
  for (FrameType t : {FrameType::kHello, FrameType::kCapabilities,
                      FrameType::kEvaluate, FrameType::kResult,
                      FrameType::kError, FrameType::kShutdown}) {
    if (frame_type_name(t) == s) return t;
  }
  return std::nullopt;
}

std::string get_string(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_string()) violation(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

void ProviderDescriptor::validate() const {
  if (name.empty()) throw InvalidArgument("provider descriptor needs a name");
  if (command.empty() || command.front().empty()) {
    throw InvalidArgument("provider '" + name + "' has no command");
  }
  if (metrics.empty()) {
    throw InvalidArgument("provider '" + name + "' lists no metrics");
  }
  for (Metric m : metrics) {
    if (!is_provider_metric(m)) {
      throw InvalidArgument("provider '" + name + "' cannot serve '" +
                            std::string(metric_name(m)) + "'");
    }
  }
  if (timeout_seconds <= 0) {
    throw InvalidArgument("provider '" + name + "' timeout must be positive");
  }
}

std::vector<ProviderDescriptor> parse_provider_descriptors(const json& doc) {
  if (!doc.is_array()) throw InvalidArgument("provider list must be a JSON array");
  std::vector<ProviderDescriptor> out;
  for (const json& item : doc) {
    ProviderDescriptor d;
    try {
      d.name = item.at("name").get<std::string>();
      d.command = item.at("command").get<std::vector<std::string>>();
      for (const auto& m : item.at("metrics").get<std::vector<std::string>>()) {
        const auto metric = parse_metric(m);
        if (!metric) throw InvalidArgument("unknown metric '" + m + "'");
        d.metrics.insert(*metric);
      }
      d.timeout_seconds = item.value("timeout_seconds", 300);
    } catch (const json::exception& e) {
      throw InvalidArgument(std::string("bad provider descriptor: ") + e.what());
    }
    d.validate();
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<ProviderDescriptor> load_provider_descriptors(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  try {
    return parse_provider_descriptors(json::parse(in));
  } catch (const json::parse_error& e) {
    throw CorruptStream(path, e.what());
  }
}

std::string_view frame_type_name(FrameType t) {
  switch (t) {
    case FrameType::kHello: return "hello";
    case FrameType::kCapabilities: return "capabilities";
    case FrameType::kEvaluate: return "evaluate";
    case FrameType::kResult: return "result";
    case FrameType::kError: return "error";
    case FrameType::kShutdown: return "shutdown";
  }
  return "?";
}

std::string encode_frame(const ProviderFrame& f) {
  ordered_json j;
  j["type"] = frame_type_name(f.type);
  j["id"] = f.id;
  if (f.protocol) j["protocol"] = *f.protocol;
  if (f.type == FrameType::kCapabilities) {
    j["metric"] = f.metric_list;
  } else if (f.metric) {
    j["metric"] = *f.metric;
  }
  if (f.sr) j["sr"] = *f.sr;
  if (f.hr) j["hr"] = *f.hr;
  if (f.value) j["value"] = *f.value;
  if (f.message) j["message"] = *f.message;
  if (!f.meta.is_null()) j["meta"] = f.meta;
  return j.dump();
}

ProviderFrame decode_frame(std::string_view line) {
  json j;
  try {
    j = json::parse(replace_non_finite_tokens(line));
  } catch (const json::parse_error&) {
    violation("frame is not valid JSON");
  }
  if (!j.is_object()) violation("frame must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    static const std::set<std::string> kKeys = {
        "type", "id", "protocol", "metric", "sr", "hr", "value", "message", "meta"};
    if (!kKeys.contains(key)) violation("unknown key '" + key + "'");
  }
  if (!j.contains("type") || !j.contains("id")) violation("missing type or id");
  ProviderFrame f;
  const auto type = parse_frame_type(get_string(j, "type"));
  if (!type) violation("unknown frame type");
  f.type = *type;
  if (!j["id"].is_number_integer()) violation("'id' must be an integer");
  f.id = j["id"].get<std::int64_t>();

  if (j.contains("protocol")) {
    if (!j["protocol"].is_number_integer()) violation("'protocol' must be an integer");
    f.protocol = j["protocol"].get<int>();
  }
  if (j.contains("metric")) {
    const json& m = j["metric"];
    if (f.type == FrameType::kCapabilities) {
      if (!m.is_array()) violation("capabilities 'metric' must be a list");
      for (const json& name : m) {
        if (!name.is_string()) violation("metric names must be strings");
        f.metric_list.push_back(name.get<std::string>());
      }
    } else {
      f.metric = get_string(j, "metric");
    }
  }
  if (j.contains("sr")) f.sr = get_string(j, "sr");
  if (j.contains("hr")) f.hr = get_string(j, "hr");
  if (j.contains("message")) f.message = get_string(j, "message");
  if (j.contains("value")) {
    const json& v = j["value"];
    if (v.is_string() && v.get<std::string>() == kNonFiniteMarker) {
      violation("non-finite metric value");
    }
    if (!v.is_number()) violation("'value' must be a number");
    f.value = v.get<double>();
    if (!std::isfinite(*f.value)) violation("non-finite metric value");
  }
  if (j.contains("meta")) {
    if (!j["meta"].is_object()) violation("'meta' must be an object");
    f.meta = j["meta"];
  }

  switch (f.type) {
    case FrameType::kHello:
    case FrameType::kCapabilities:
      if (!f.protocol) violation("handshake frame without 'protocol'");
      break;
    case FrameType::kEvaluate:
      if (!f.metric || !f.sr) violation("evaluate needs 'metric' and 'sr'");
      break;
    case FrameType::kResult:
      if (!f.value) violation("result without 'value'");
      break;
    case FrameType::kError:
      if (!f.message) violation("error without 'message'");
      break;
    case FrameType::kShutdown:
      break;
  }
  return f;
}

ProviderSession ProviderSession::spawn_and_handshake(
    const ProviderDescriptor& desc, const SessionOptions& options) {
  desc.validate();
  int sv[2];
  if (socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
    throw ProviderError(ProviderErrc::kSpawn,
                        "socketpair failed: " + std::string(std::strerror(errno)));
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, sv[1], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, sv[1], STDOUT_FILENO);

  std::vector<char*> argv;
  for (const std::string& arg : desc.command) {
    argv.push_back(const_cast<char*>(arg.c_str()));
  }
  argv.push_back(nullptr);
  pid_t pid = -1;
  const int rc = posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(sv[1]);
  if (rc != 0) {
    close(sv[0]);
    throw ProviderError(ProviderErrc::kSpawn, "cannot start provider '" +
                                                  desc.name + "': " +
                                                  std::strerror(rc));
  }

  ProviderSession s;
  s.name_ = desc.name;
  s.pid_ = pid;
  s.fd_ = sv[0];
  s.alive_ = true;
  s.timeout_ = std::chrono::seconds(desc.timeout_seconds);
  s.shutdown_grace_ = options.shutdown_grace;

  ProviderFrame hello;
  hello.type = FrameType::kHello;
  hello.id = 0;
  hello.protocol = kProviderProtocolVersion;
  try {
    s.send(hello);
  } catch (const ProviderError&) {
    s.fail(ProviderErrc::kHandshake,
           "provider '" + desc.name + "' exited before the handshake");
  }
  ProviderFrame caps;
  try {
    caps = s.receive(options.handshake_timeout.value_or(s.timeout_),
                     ProviderErrc::kHandshake);
  } catch (const ProviderError& e) {
    if (e.code() == ProviderErrc::kHandshake) throw;
    throw ProviderError(ProviderErrc::kHandshake,
                        "provider '" + desc.name + "' handshake: " + e.what());
  }
  if (caps.type != FrameType::kCapabilities || caps.id != 0) {
    s.fail(ProviderErrc::kHandshake,
           "provider '" + desc.name + "' did not answer hello with capabilities");
  }
  if (caps.protocol != kProviderProtocolVersion) {
    s.fail(ProviderErrc::kHandshake, "provider '" + desc.name +
                                         "' speaks protocol " +
                                         std::to_string(caps.protocol.value_or(-1)));
  }
  std::set<Metric> advertised;
  for (const std::string& name : caps.metric_list) {
    if (auto m = parse_metric(name)) advertised.insert(*m);
  }
  std::string missing;
  for (Metric m : desc.metrics) {
    if (!advertised.contains(m)) {
      if (!missing.empty()) missing += ", ";
      missing += metric_name(m);
    }
  }
  if (!missing.empty()) {
    s.fail(ProviderErrc::kCapabilityMismatch,
           "provider '" + desc.name + "' does not advertise: " + missing);
  }
  s.metrics_ = desc.metrics;
  return s;
}

ProviderSession::ProviderSession(ProviderSession&& other) noexcept {
  *this = std::move(other);
}

ProviderSession& ProviderSession::operator=(ProviderSession&& other) noexcept {
  if (this != &other) {
    try {
      shutdown();
    } catch (...) {
    }
    name_ = std::move(other.name_);
    pid_ = std::exchange(other.pid_, -1);
    fd_ = std::exchange(other.fd_, -1);
    alive_ = std::exchange(other.alive_, false);
    next_id_ = other.next_id_;
    metrics_ = std::move(other.metrics_);
    timeout_ = other.timeout_;
    shutdown_grace_ = other.shutdown_grace_;
    buffer_ = std::move(other.buffer_);
    last_meta_ = std::move(other.last_meta_);
    exit_status_ = other.exit_status_;
  }
  return *this;
}

ProviderSession::~ProviderSession() {
  try {
    shutdown();
  } catch (...) {
  }
}

void ProviderSession::send(const ProviderFrame& frame) {
  const std::string line = encode_frame(frame) + "\n";
  std::size_t off = 0;
  while (off < line.size()) {
    const ssize_t n = ::send(fd_, line.data() + off, line.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProviderError(ProviderErrc::kTimeout, "provider '" + name_ +
                                                      "' is gone: " +
                                                      std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

ProviderFrame ProviderSession::receive(std::chrono::milliseconds timeout,
                                       ProviderErrc on_silence) {
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      try {
        return decode_frame(line);
      } catch (const ProviderError& e) {
        fail(e.code(), "provider '" + name_ + "': " + e.what());
      }
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    if (left.count() <= 0) {
      fail(on_silence, "provider '" + name_ + "' timed out after " +
                           std::to_string(timeout.count()) + " ms");
    }
    pollfd p{fd_, POLLIN, 0};
    const int rc = poll(&p, 1, static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      fail(on_silence, "poll failed: " + std::string(std::strerror(errno)));
    }
    if (rc == 0) continue;
    char chunk[4096];
    const ssize_t n = read(fd_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      fail(on_silence, "provider '" + name_ + "' read failed");
    }
    if (n == 0) fail(on_silence, "provider '" + name_ + "' exited");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

double ProviderSession::evaluate(Metric metric, const std::filesystem::path& sr,
                                 const std::optional<std::filesystem::path>& hr) {
  if (!alive_) {
    throw ProviderError(ProviderErrc::kSessionDead,
                        "provider '" + name_ + "' session is dead");
  }
  const std::string mname(metric_name(metric));
  if (!metrics_.contains(metric)) {
    throw ProviderError(ProviderErrc::kPrecondition,
                        "provider '" + name_ + "' does not serve " + mname);
  }
  if (is_full_reference(metric) && !hr) {
    throw ProviderError(ProviderErrc::kPrecondition,
                        mname + " is full-reference and needs an HR image");
  }
  if (!is_full_reference(metric) && hr) {
    throw ProviderError(ProviderErrc::kPrecondition,
                        mname + " is no-reference; an HR image is not allowed");
  }
  ProviderFrame req;
  req.type = FrameType::kEvaluate;
  req.id = next_id_++;
  req.metric = mname;
  req.sr = sr.string();
  if (hr) req.hr = hr->string();
  try {
    send(req);
  } catch (const ProviderError& e) {
    fail(ProviderErrc::kTimeout, e.what());
  }
  ProviderFrame resp = receive(timeout_, ProviderErrc::kTimeout);
  if (resp.id != req.id) {
    fail(ProviderErrc::kProtocolViolation,
         "provider '" + name_ + "' answered id " + std::to_string(resp.id) +
             ", expected " + std::to_string(req.id));
  }
  if (resp.type == FrameType::kError) {
    throw ProviderError(ProviderErrc::kProviderError,
                        "provider '" + name_ + "' failed on " + mname + ": " +
                            *resp.message);
  }
  if (resp.type != FrameType::kResult) {
    fail(ProviderErrc::kProtocolViolation,
         "provider '" + name_ + "' sent '" +
             std::string(frame_type_name(resp.type)) + "' instead of a result");
  }
  if (resp.metric && *resp.metric != mname) {
    fail(ProviderErrc::kProtocolViolation,
         "provider '" + name_ + "' answered for metric " + *resp.metric);
  }
  last_meta_ = resp.meta;
  return *resp.value;
}

bool ProviderSession::try_reap() {
  int status = 0;
  const pid_t r = waitpid(pid_, &status, WNOHANG);
  if (r == 0) return false;
  if (r == pid_) {
    if (WIFEXITED(status)) {
      exit_status_ = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
      exit_status_ = 128 + WTERMSIG(status);
    }
  }
  pid_ = -1;
  return true;
}

void ProviderSession::kill_and_reap() {
  if (pid_ > 0 && !try_reap()) {
    ::kill(pid_, SIGKILL);
    int status = 0;
    while (waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
    if (WIFSIGNALED(status)) exit_status_ = 128 + WTERMSIG(status);
    else if (WIFEXITED(status)) exit_status_ = WEXITSTATUS(status);
    pid_ = -1;
  }
  if (fd_ >= 0) {
    close(fd_);
    fd_ = -1;
  }
  alive_ = false;
}

void ProviderSession::fail(ProviderErrc code, const std::string& what) {
  kill_and_reap();
  throw ProviderError(code, what);
}

void ProviderSession::shutdown() {
  if (pid_ <= 0 && fd_ < 0) return;
  if (alive_) {
    ProviderFrame bye;
    bye.type = FrameType::kShutdown;
    bye.id = next_id_++;
    try {
      send(bye);
    } catch (const ProviderError&) {
    }
    ::shutdown(fd_, SHUT_WR);
    alive_ = false;
    const auto deadline = Clock::now() + shutdown_grace_;
    while (pid_ > 0 && !try_reap() && Clock::now() < deadline) {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  }
  kill_and_reap();
}

ProviderPool::ProviderPool(std::vector<ProviderDescriptor> descriptors,
                           SessionOptions options)
    : descriptors_(std::move(descriptors)), options_(options) {
  for (std::size_t i = 0; i < descriptors_.size(); ++i) {
    descriptors_[i].validate();
    for (Metric m : descriptors_[i].metrics) route_.emplace(m, i);
  }
}

ProviderPool::~ProviderPool() { shutdown_all(); }

std::set<Metric> ProviderPool::routable_metrics() const {
  std::set<Metric> out;
  for (const auto& [m, _] : route_) out.insert(m);
  return out;
}

double ProviderPool::evaluate(Metric metric, const std::filesystem::path& sr,
                              const std::optional<std::filesystem::path>& hr) {
  const auto route = route_.find(metric);
  if (route == route_.end()) {
    throw ProviderError(ProviderErrc::kPrecondition,
                        "no provider serves " + std::string(metric_name(metric)));
  }
  const std::size_t idx = route->second;
  if (failed_.contains(idx)) {
    throw ProviderError(ProviderErrc::kSessionDead,
                        "provider '" + descriptors_[idx].name + "' has failed");
  }
  auto it = sessions_.find(idx);
  if (it == sessions_.end()) {
    try {
      it = sessions_
               .emplace(idx, std::make_unique<ProviderSession>(
                                 ProviderSession::spawn_and_handshake(
                                     descriptors_[idx], options_)))
               .first;
    } catch (const ProviderError&) {
      failed_.insert(idx);
      throw;
    }
  }
  ProviderSession& session = *it->second;
  try {
    const double v = session.evaluate(metric, sr, hr);
    if (!session.last_meta().is_null()) meta_[metric] = session.last_meta();
    return v;
  } catch (const ProviderError&) {
    if (!session.alive()) {
      sessions_.erase(it);
      failed_.insert(idx);
    }
    throw;
  }
}

void ProviderPool::shutdown_all() {
  for (auto& [_, session] : sessions_) session->shutdown();
  sessions_.clear();
}

}  // namespace srbench
