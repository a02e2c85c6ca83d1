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

#include <signal.h>

#include <chrono>

#include <gtest/gtest.h>

#include "srbench/provider.h"
#include "test_util.h"

namespace srbench {
namespace {

using namespace std::chrono_literals;

ProviderDescriptor mock(std::vector<std::string> extra = {},
                        std::set<Metric> metrics = {Metric::kLpips, Metric::kMusiq},
                        int timeout = 10) {
  ProviderDescriptor d;
  d.name = "mock";
  d.command = {testing::mock_provider().string()};
  d.command.insert(d.command.end(), extra.begin(), extra.end());
  d.metrics = std::move(metrics);
  d.timeout_seconds = timeout;
  return d;
}

SessionOptions quick() {
  SessionOptions o;
  o.shutdown_grace = 500ms;
  return o;
}

ProviderErrc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ProviderError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ProviderError thrown";
  return ProviderErrc::kSpawn;
}

TEST(Frame, EncodesTypeAndIdFirst) {
  ProviderFrame f;
  f.type = FrameType::kEvaluate;
  f.id = 3;
  f.metric = "lpips";
  f.sr = "/a/sr.png";
  f.hr = "/a/hr.png";
  EXPECT_EQ(encode_frame(f),
            R"({"type":"evaluate","id":3,"metric":"lpips","sr":"/a/sr.png","hr":"/a/hr.png"})");
}

TEST(Frame, RoundTripsEveryType) {
  std::vector<ProviderFrame> frames(6);
  frames[0].type = FrameType::kHello;
  frames[0].protocol = 1;
  frames[1].type = FrameType::kCapabilities;
  frames[1].protocol = 1;
  frames[1].metric_list = {"lpips", "musiq"};
  frames[2].type = FrameType::kEvaluate;
  frames[2].id = 5;
  frames[2].metric = "musiq";
  frames[2].sr = "x.png";
  frames[3].type = FrameType::kResult;
  frames[3].id = 5;
  frames[3].metric = "musiq";
  frames[3].value = 71.4919;
  frames[3].meta = {{"checkpoint", "abc"}};
  frames[4].type = FrameType::kError;
  frames[4].id = 6;
  frames[4].message = "boom";
  frames[5].type = FrameType::kShutdown;
  frames[5].id = 7;
  for (const ProviderFrame& f : frames) {
    EXPECT_EQ(decode_frame(encode_frame(f)), f) << encode_frame(f);
  }
}

TEST(Frame, ResultValuesKeepFullPrecision) {
  ProviderFrame f;
  f.type = FrameType::kResult;
  f.id = 1;
  f.metric = "lpips";
  f.value = 0.1234567890123456789;
  EXPECT_EQ(*decode_frame(encode_frame(f)).value, 0.1234567890123456789);
}

TEST(Frame, RejectsMalformedInput) {
  const char* bad[] = {
      "not json",
      "[]",
      R"({"id":1})",
      R"({"type":"result","id":1,"metric":"lpips"})",
      R"({"type":"result","id":1,"metric":"lpips","value":"0.2"})",
      R"({"type":"result","id":1,"metric":"lpips","value":NaN})",
      R"({"type":"result","id":1,"metric":"lpips","value":Infinity})",
      R"({"type":"result","id":1,"metric":"lpips","value":0.2,"extra":1})",
      R"({"type":"evaluate","id":1,"metric":"lpips"})",
      R"({"type":"error","id":1})",
      R"({"type":"bogus","id":1})",
      R"({"type":"hello"})",
      R"({"type":"hello","id":1.5,"protocol":1})",
  };
  for (const char* line : bad) {
    EXPECT_THROW(decode_frame(line), ProviderError) << line;
  }
}

TEST(Descriptor, ParsesAndValidates) {
  const auto d = parse_provider_descriptors(nlohmann::json::parse(
      R"([{"name":"n","command":["x","--y"],"metrics":["lpips","dists"],"timeout_seconds":5}])"));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].command.size(), 2u);
  EXPECT_EQ(d[0].metrics, (std::set<Metric>{Metric::kLpips, Metric::kDists}));
  EXPECT_EQ(d[0].timeout_seconds, 5);
  EXPECT_THROW(parse_provider_descriptors(nlohmann::json::parse(
                   R"([{"name":"n","command":["x"],"metrics":["psnr"]}])")),
               InvalidArgument);
  EXPECT_THROW(parse_provider_descriptors(nlohmann::json::parse(
                   R"([{"name":"n","command":[],"metrics":["lpips"]}])")),
               InvalidArgument);
  EXPECT_THROW(parse_provider_descriptors(nlohmann::json::parse(
                   R"([{"name":"n","command":["x"],"metrics":["lpips"],"timeout_seconds":0}])")),
               InvalidArgument);
  EXPECT_THROW(parse_provider_descriptors(nlohmann::json::parse("{}")), InvalidArgument);
}

TEST(Session, HandshakeEvaluateShutdown) {
  auto s = ProviderSession::spawn_and_handshake(mock(), quick());
  EXPECT_TRUE(s.alive());
  EXPECT_EQ(s.evaluate(Metric::kLpips, "sr.png", std::filesystem::path("hr.png")), 0.2113);
  EXPECT_EQ(s.last_meta()["checkpoint"], "mock-lpips");
  EXPECT_EQ(s.evaluate(Metric::kMusiq, "sr.png"), 71.4919);
  s.shutdown();
  EXPECT_FALSE(s.alive());
  EXPECT_EQ(s.exit_status(), 0);
  s.shutdown();
}

TEST(Session, ValuesPassThroughUnmodified) {
  auto s = ProviderSession::spawn_and_handshake(
      mock({"--value", "lpips=0.12345678901234567"}), quick());
  EXPECT_EQ(s.evaluate(Metric::kLpips, "a", std::filesystem::path("b")), 0.12345678901234567);
}

TEST(Session, SpawnFailure) {
  ProviderDescriptor d = mock();
  d.command = {"/nonexistent/provider-binary"};
  EXPECT_EQ(code_of([&] { ProviderSession::spawn_and_handshake(d, quick()); }),
            ProviderErrc::kSpawn);
}

TEST(Session, HandshakeFailures) {
  for (const char* fault : {"exit-at-start", "old-protocol"}) {
    EXPECT_EQ(code_of([&] {
                ProviderSession::spawn_and_handshake(mock({"--fault", fault}), quick());
              }),
              ProviderErrc::kHandshake)
        << fault;
  }
  SessionOptions o = quick();
  o.handshake_timeout = 300ms;
  const auto start = std::chrono::steady_clock::now();
  EXPECT_EQ(code_of([&] {
              ProviderSession::spawn_and_handshake(mock({"--fault", "no-handshake"}), o);
            }),
            ProviderErrc::kHandshake);
  EXPECT_LT(std::chrono::steady_clock::now() - start, 3s);
}

TEST(Session, CapabilityMismatch) {
  EXPECT_EQ(code_of([&] {
              ProviderSession::spawn_and_handshake(
                  mock({"--advertise", "lpips"}, {Metric::kLpips, Metric::kDists}), quick());
            }),
            ProviderErrc::kCapabilityMismatch);
}

TEST(Session, PreconditionsAreCheckedBeforeSending) {
  auto s = ProviderSession::spawn_and_handshake(mock(), quick());
  EXPECT_EQ(code_of([&] { s.evaluate(Metric::kLpips, "sr.png"); }), ProviderErrc::kPrecondition);
  EXPECT_EQ(code_of([&] { s.evaluate(Metric::kMusiq, "sr.png", std::filesystem::path("hr")); }),
            ProviderErrc::kPrecondition);
  EXPECT_EQ(code_of([&] { s.evaluate(Metric::kDists, "sr", std::filesystem::path("hr")); }),
            ProviderErrc::kPrecondition);
  EXPECT_TRUE(s.alive());
  EXPECT_EQ(s.evaluate(Metric::kMusiq, "sr.png"), 71.4919);
}

TEST(Session, CrashIsReportedAndKillsTheSession) {
  auto s = ProviderSession::spawn_and_handshake(mock({"--fault", "crash"}), quick());
  EXPECT_EQ(code_of([&] { s.evaluate(Metric::kMusiq, "sr.png"); }), ProviderErrc::kTimeout);
  EXPECT_FALSE(s.alive());
  EXPECT_EQ(s.exit_status(), 128 + SIGABRT);
  EXPECT_EQ(code_of([&] { s.evaluate(Metric::kMusiq, "sr.png"); }), ProviderErrc::kSessionDead);
}

TEST(Session, HangTimesOut) {
  auto s = ProviderSession::spawn_and_handshake(
      mock({"--fault", "hang"}, {Metric::kMusiq}, 1), quick());
  const auto start = std::chrono::steady_clock::now();
  EXPECT_EQ(code_of([&] { s.evaluate(Metric::kMusiq, "sr.png"); }), ProviderErrc::kTimeout);
  EXPECT_LT(std::chrono::steady_clock::now() - start, 4s);
  EXPECT_FALSE(s.alive());
}

TEST(Session, NonFiniteValueIsAProtocolViolation) {
  auto s = ProviderSession::spawn_and_handshake(mock({"--fault", "nonfinite"}), quick());
  EXPECT_EQ(code_of([&] { s.evaluate(Metric::kMusiq, "sr.png"); }),
            ProviderErrc::kProtocolViolation);
  EXPECT_FALSE(s.alive());
}

TEST(Session, WrongIdIsAProtocolViolation) {
  auto s = ProviderSession::spawn_and_handshake(mock({"--fault", "wrong-id"}), quick());
  EXPECT_EQ(code_of([&] { s.evaluate(Metric::kMusiq, "sr.png"); }),
            ProviderErrc::kProtocolViolation);
}

TEST(Session, ErrorFrameKeepsTheSessionAlive) {
  auto s = ProviderSession::spawn_and_handshake(mock({"--fault", "error-frame"}), quick());
  EXPECT_EQ(code_of([&] { s.evaluate(Metric::kMusiq, "sr.png"); }),
            ProviderErrc::kProviderError);
  EXPECT_TRUE(s.alive());
  EXPECT_EQ(s.evaluate(Metric::kMusiq, "sr.png"), 71.4919);
}

TEST(Session, FaultAtLaterRequest) {
  auto s = ProviderSession::spawn_and_handshake(
      mock({"--fault", "crash", "--fault-at", "3"}), quick());
  EXPECT_EQ(s.evaluate(Metric::kMusiq, "a"), 71.4919);
  EXPECT_EQ(s.evaluate(Metric::kMusiq, "b"), 71.4919);
  EXPECT_EQ(code_of([&] { s.evaluate(Metric::kMusiq, "c"); }), ProviderErrc::kTimeout);
}

TEST(Session, UncooperativeShutdownIsKilled) {
  SessionOptions o;
  o.shutdown_grace = 200ms;
  auto s = ProviderSession::spawn_and_handshake(mock({"--fault", "ignore-shutdown"}), o);
  const auto start = std::chrono::steady_clock::now();
  s.shutdown();
  EXPECT_LT(std::chrono::steady_clock::now() - start, 3s);
  EXPECT_EQ(s.exit_status(), 128 + SIGKILL);
}

TEST(Session, MoveTransfersOwnership) {
  auto a = ProviderSession::spawn_and_handshake(mock(), quick());
  ProviderSession b = std::move(a);
  EXPECT_EQ(b.evaluate(Metric::kMusiq, "x"), 71.4919);
  b.shutdown();
  EXPECT_EQ(b.exit_status(), 0);
}

TEST(Pool, RoutesToTheFirstServingDescriptor) {
  ProviderDescriptor first = mock({"--value", "musiq=50"}, {Metric::kMusiq});
  ProviderDescriptor second = mock({}, {Metric::kMusiq, Metric::kDists});
  ProviderPool pool({first, second}, quick());
  EXPECT_EQ(pool.routable_metrics(), (std::set<Metric>{Metric::kMusiq, Metric::kDists}));
  EXPECT_EQ(pool.evaluate(Metric::kMusiq, "x", std::nullopt), 50.0);
  EXPECT_EQ(pool.evaluate(Metric::kDists, "x", std::filesystem::path("y")), 0.1082);
  EXPECT_EQ(pool.metadata().at(Metric::kDists)["checkpoint"], "mock-dists");
  EXPECT_EQ(code_of([&] { pool.evaluate(Metric::kClipiqa, "x", std::nullopt); }),
            ProviderErrc::kPrecondition);
  pool.shutdown_all();
}

TEST(Pool, FailedDescriptorStaysFailed) {
  ProviderPool pool({mock({"--fault", "crash"}, {Metric::kMusiq})}, quick());
  EXPECT_EQ(code_of([&] { pool.evaluate(Metric::kMusiq, "x", std::nullopt); }),
            ProviderErrc::kTimeout);
  EXPECT_EQ(code_of([&] { pool.evaluate(Metric::kMusiq, "x", std::nullopt); }),
            ProviderErrc::kSessionDead);
}

}  // namespace
}  // namespace srbench
