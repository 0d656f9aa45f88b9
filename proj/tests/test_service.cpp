// Copyright 2026 The feedsim Authors.
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


#include <chrono>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "feedsim/service.hpp"
#include "feedsim/session_actor.hpp"
#include "feedsim/telemetry_hub.hpp"
#include "support/oracles.hpp"

// After Eigen: <resolv.h> defines a `_res` macro.
#include "httplib.h"

namespace feedsim {
namespace {

using namespace std::chrono_literals;

TelemetryFrame frame_at(double t) {
  TelemetryFrame f;
  f.t = t;
  return f;
}

TEST(TelemetryHub, NewSubscribersStartFromTheLatestFrame) {
  TelemetryHub hub;
  hub.publish(frame_at(1.0));
  hub.publish(frame_at(2.0));
  auto sub = hub.subscribe();
  EXPECT_EQ(hub.subscribers(), 1u);
  ASSERT_EQ(sub->pending(), 1u);
  EXPECT_EQ(sub->next(0ms)->t, 2.0);
  hub.publish(frame_at(3.0));
  hub.publish(frame_at(4.0));
  EXPECT_EQ(sub->next(0ms)->t, 3.0);
  EXPECT_EQ(sub->next(0ms)->t, 4.0);
  EXPECT_FALSE(sub->next(1ms).has_value());
}

TEST(TelemetryHub, CloseDrainsThenEnds) {
  TelemetryHub hub;
  auto sub = hub.subscribe();
  hub.publish(frame_at(1.0));
  hub.close();
  EXPECT_EQ(sub->next(0ms)->t, 1.0);
  EXPECT_FALSE(sub->next(10ms).has_value());
  EXPECT_TRUE(sub->done());
  auto late = hub.subscribe();
  EXPECT_EQ(late->next(0ms)->t, 1.0);
  EXPECT_TRUE(late->done());
  TelemetryHub empty;
  empty.close();
  EXPECT_TRUE(empty.subscribe()->done());
}

TEST(TelemetryHub, EverySubscriberSeesEveryFrameInOrder) {
  TelemetryHub hub;
  std::vector<std::shared_ptr<TelemetryHub::Subscription>> subs;
  for (int i = 0; i < 4; ++i) subs.push_back(hub.subscribe());
  std::thread producer([&] {
    for (int i = 1; i <= 1000; ++i) hub.publish(frame_at(i));
    hub.close();
  });
  for (auto& s : subs) {
    double expect = 1.0;
    while (auto f = s->next(1000ms)) {
      ASSERT_EQ(f->t, expect);
      expect += 1.0;
    }
    EXPECT_EQ(expect, 1001.0);
  }
  producer.join();
}

SessionConfig fast_config(bool autorun) {
  SessionConfig cfg;
  cfg.clock = ClockMode::Fast;
  cfg.autorun = autorun;
  return cfg;
}

TEST(SessionActor, ManualFastClockMovesOnlyOnAdvance) {
  const SessionConfig cfg = fast_config(false);
  SessionActor actor(std::make_unique<Session>(cfg), cfg);
  std::this_thread::sleep_for(20ms);
  EXPECT_EQ(actor.call([](Session& s) { return s.ticks(); }), 0u);
  const TelemetryFrame f = actor.advance(1.0);
  EXPECT_NEAR(f.t, 1.0, 1e-9);
  EXPECT_EQ(actor.call([](Session& s) { return s.ticks(); }), 50u);
  EXPECT_THROW(actor.advance(-1.0), std::invalid_argument);
}

TEST(SessionActor, AutorunFastClockFinishes) {
  SessionConfig cfg = fast_config(true);
  cfg.duration = 30.0;
  SessionActor actor(std::make_unique<Session>(cfg), cfg);
  const auto deadline = std::chrono::steady_clock::now() + 10s;
  while (!actor.finished() && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(1ms);
  }
  ASSERT_TRUE(actor.finished());
  EXPECT_NEAR(actor.call([](Session& s) { return s.now(); }), 30.0, 1e-9);
}

TEST(SessionActor, RealtimeRefusesAdvanceAndCallsFailAfterStop) {
  SessionConfig cfg;
  SessionActor actor(std::make_unique<Session>(cfg), cfg);
  EXPECT_THROW(actor.advance(1.0), std::logic_error);
  std::this_thread::sleep_for(100ms);
  EXPECT_GT(actor.call([](Session& s) { return s.ticks(); }), 0u);
  actor.stop();
  actor.stop();
  EXPECT_THROW(actor.call([](Session& s) { return s.ticks(); }), std::runtime_error);
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    port_ = service_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { service_.listen_after_bind(); });
    service_.wait_until_ready();
  }
  void TearDown() override {
    service_.stop();
    thread_.join();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(10, 0);
    return c;
  }

  json post(const std::string& path, const json& body, int expect_status) {
    auto res = client().Post(path, body.dump(), "application/json");
    if (!res) {
      ADD_FAILURE() << "no response from " << path;
      return {};
    }
    EXPECT_EQ(res->status, expect_status) << path << ": " << res->body;
    return json::parse(res->body);
  }

  json get(const std::string& path, int expect_status) {
    auto res = client().Get(path);
    if (!res) {
      ADD_FAILURE() << "no response from " << path;
      return {};
    }
    EXPECT_EQ(res->status, expect_status) << path << ": " << res->body;
    return json::parse(res->body);
  }

  std::vector<json> stream(const std::string& path) {
    std::string body;
    auto res = client().Get(path, [&](const char* data, std::size_t n) {
      body.append(data, n);
      return true;
    });
    EXPECT_TRUE(res);
    if (res) {
      EXPECT_EQ(res->status, 200);
      EXPECT_EQ(res->get_header_value("Content-Type"), "application/x-ndjson");
    }
    std::vector<json> lines;
    std::istringstream in(body);
    for (std::string line; std::getline(in, line);) lines.push_back(json::parse(line));
    return lines;
  }

  Service service_;
  int port_ = -1;
  std::thread thread_;
};

TEST_F(ServiceTest, HealthAndCors) {
  auto res = client().Get("/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
  auto pre = client().Options("/session");
  ASSERT_TRUE(pre);
  EXPECT_EQ(pre->status, 204);
}

TEST_F(ServiceTest, SessionLifecycle) {
  get("/state", 404);
  const json created = post("/session", {{"clock", "fast"}, {"autorun", false}}, 201);
  EXPECT_EQ(created["id"], "s1");
  EXPECT_EQ(created["frame"]["state"], "Idle");
  EXPECT_EQ(created["config"]["clock"], "fast");
  post("/session", json::object(), 409);

  auto del = client().Delete("/session");
  ASSERT_TRUE(del);
  EXPECT_EQ(del->status, 200);
  EXPECT_EQ(json::parse(del->body)["id"], "s1");
  auto again = client().Delete("/session");
  ASSERT_TRUE(again);
  EXPECT_EQ(again->status, 404);
  EXPECT_EQ(post("/session", {{"clock", "fast"}, {"autorun", false}}, 201)["id"], "s2");
}

TEST_F(ServiceTest, BadSessionRequestsNameTheProblem) {
  const json bad_menu = post("/session", {{"menu", "/nonexistent/menu.json"}}, 400);
  EXPECT_NE(bad_menu["error"].get<std::string>().find("/nonexistent/menu.json"), std::string::npos);
  post("/session", {{"dt", -1}}, 400);
  auto res = client().Post("/session", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
}

TEST_F(ServiceTest, OperatorRequestsOnAFastSession) {
  post("/session", {{"clock", "fast"}, {"autorun", false}}, 201);

  const json heard = post("/transcript", {{"text", "Rise"}}, 200);
  EXPECT_EQ(heard["heard"], "Rise");
  EXPECT_EQ(heard["parse"]["matched"], true);
  EXPECT_EQ(heard["parse"]["command"]["slot"], "rice");
  EXPECT_EQ(heard["parse"]["distance"], 1);
  EXPECT_EQ(heard["ack"]["accepted"], true);

  const json busy = post("/command", {{"command", "serve"}, {"slot", "salad"}}, 200);
  EXPECT_EQ(busy["ack"]["accepted"], false);
  EXPECT_EQ(busy["ack"]["reason"], "busy");

  const json nomatch = post("/transcript", {{"text", "xylophone"}}, 200);
  EXPECT_EQ(nomatch["parse"]["matched"], false);
  EXPECT_TRUE(nomatch["ack"].is_null());

  post("/presence", {{"present", true}}, 200);
  const json adv = post("/advance", {{"seconds", 30}}, 200);
  EXPECT_EQ(adv["frame"]["state"], "Presenting");
  EXPECT_EQ(adv["frame"]["sensor"]["present"], true);

  const json s1 = get("/state", 200);
  const json s2 = get("/state", 200);
  EXPECT_EQ(s1, s2);
  EXPECT_EQ(s1["ticks"], 1500);
  EXPECT_EQ(s1["safety_violations"], 0);
  EXPECT_EQ(s1["sensor_mode"], "manual");
  EXPECT_EQ(s1["finished"], false);

  post("/command", {{"command", "emergency_stop"}}, 200);
  EXPECT_EQ(post("/advance", {{"seconds", 0.1}}, 200)["frame"]["state"], "Halted");
  const json reset = post("/reset", json::object(), 200);
  EXPECT_EQ(reset["ack"]["accepted"], true);
  EXPECT_EQ(reset["frame"]["state"], "Idle");

  post("/transcript", json::object(), 400);
  post("/command", {{"command", "dance"}}, 400);
  post("/presence", {{"present", "yes"}}, 400);
  post("/advance", {{"seconds", "ten"}}, 400);
  post("/transcript", {{"text", "a\nb"}}, 400);
}

TEST_F(ServiceTest, CsvExports) {
  post("/session", {{"clock", "fast"}, {"autorun", false}}, 201);
  post("/transcript", {{"text", "salad"}}, 200);
  post("/advance", {{"seconds", 1}}, 200);
  auto tel = client().Get("/telemetry.csv");
  ASSERT_TRUE(tel);
  EXPECT_EQ(tel->status, 200);
  EXPECT_EQ(tel->body.rfind(telemetry_csv_header() + "\n", 0), 0u);
  EXPECT_EQ(std::count(tel->body.begin(), tel->body.end(), '\n'), 52);
  auto ev = client().Get("/events.csv");
  ASSERT_TRUE(ev);
  EXPECT_NE(ev->body.find("transcript,salad,1,serve:salad"), std::string::npos);
}

TEST_F(ServiceTest, ConfigWithAndWithoutSession) {
  const json idle = get("/config", 200);
  EXPECT_EQ(idle["menu"]["slots"].size(), 3u);
  EXPECT_EQ(idle["robot"]["dh_rows"].size(), 5u);
  post("/session", {{"clock", "fast"}, {"autorun", false}, {"seed", 5}}, 201);
  EXPECT_EQ(get("/config", 200)["session"]["seed"], 5);
}

TEST_F(ServiceTest, RealtimeSessionStreamsLiveTelemetry) {
  post("/session", {{"dt", 0.01}}, 201);
  post("/advance", {{"seconds", 1}}, 409);
  const auto frames = stream("/telemetry?limit=5");
  ASSERT_EQ(frames.size(), 5u);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    EXPECT_GT(frames[i]["t"].get<double>(), frames[i - 1]["t"].get<double>());
  }
  auto bad = client().Get("/telemetry?limit=x");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
}

TEST_F(ServiceTest, StreamFollowsAdvanceOnAManualFastSession) {
  post("/session", {{"clock", "fast"}, {"autorun", false}}, 201);
  std::vector<json> frames;
  std::thread reader([&] { frames = stream("/telemetry?limit=11"); });
  std::this_thread::sleep_for(100ms);
  post("/advance", {{"seconds", 0.2}}, 200);
  reader.join();
  ASSERT_EQ(frames.size(), 11u);
  EXPECT_EQ(frames.front()["t"], 0.0);
  EXPECT_NEAR(frames.back()["t"].get<double>(), 0.2, 1e-9);
}

TEST_F(ServiceTest, ScriptedAutorunSessionRunsToTheTraceEnd) {
  const std::string trace = testing::data_path("scenarios/traces/three_meals.csv");
  post("/session",
       {{"clock", "fast"}, {"sensor", {{"mode", "scripted"}, {"trace", trace}}}}, 201);
  const auto deadline = std::chrono::steady_clock::now() + 20s;
  json st;
  do {
    std::this_thread::sleep_for(10ms);
    st = get("/state", 200);
  } while (!st["finished"].get<bool>() && std::chrono::steady_clock::now() < deadline);
  ASSERT_TRUE(st["finished"].get<bool>());
  EXPECT_EQ(st["sensor_mode"], "scripted");
  EXPECT_NEAR(st["t"].get<double>(), SensorTrace::load_csv(trace).end_time().value(), 1e-9);
  const auto tail = stream("/telemetry");
  ASSERT_EQ(tail.size(), 1u);
  EXPECT_EQ(tail[0]["t"], st["t"]);
}

TEST_F(ServiceTest, EndingTheSessionEndsOpenStreams) {
  post("/session", {{"dt", 0.01}}, 201);
  std::vector<json> frames;
  std::thread reader([&] { frames = stream("/telemetry"); });
  std::this_thread::sleep_for(150ms);
  auto del = client().Delete("/session");
  ASSERT_TRUE(del);
  reader.join();
  EXPECT_FALSE(frames.empty());
}

}  // namespace
}  // namespace feedsim
