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


#include <random>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "feedsim/hwsim.hpp"
#include "support/oracles.hpp"

namespace feedsim {
namespace {

SensorTrace two_step() {
  return SensorTrace({{0.0, 500.0}, {5.0, 100.0}}, SensorTrace::Mode::Scripted);
}

TEST(SensorAt, ZeroOrderHold) {
  const SensorReading r = sensor_at(two_step(), 4.9);
  EXPECT_EQ(r.distance_mm, 500.0);
  EXPECT_FALSE(r.present);
  EXPECT_EQ(r.t, 4.9);
}

TEST(SensorAt, RightContinuousAtEvents) {
  const SensorReading r = sensor_at(two_step(), 5.0);
  EXPECT_EQ(r.distance_mm, 100.0);
  EXPECT_TRUE(r.present);
  EXPECT_EQ(sensor_at(two_step(), 1e9).distance_mm, 100.0);
}

TEST(SensorAt, EmptyTraceSeesNothing) {
  const SensorTrace empty;
  for (double t : {0.0, 1.0, 1e6}) {
    const SensorReading r = sensor_at(empty, t, 150.0, 1000.0);
    EXPECT_FALSE(r.present);
    EXPECT_EQ(r.distance_mm, 1000.0);
  }
}

TEST(SensorAt, BeforeTheFirstEventSeesNothing) {
  const SensorTrace trace({{2.0, 50.0}}, SensorTrace::Mode::Scripted);
  EXPECT_FALSE(sensor_at(trace, 1.999).present);
  EXPECT_TRUE(sensor_at(trace, 2.0).present);
  EXPECT_THROW(sensor_at(trace, -0.1), std::invalid_argument);
}

TEST(SensorAt, ThresholdIsStrict) {
  const SensorTrace trace({{0.0, 150.0}}, SensorTrace::Mode::Scripted);
  EXPECT_FALSE(sensor_at(trace, 0.0, 150.0).present);
  EXPECT_TRUE(sensor_at(trace, 0.0, 150.5).present);
}

TEST(SensorTraceProperty, PiecewiseConstantBetweenEvents) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> gap(0.01, 3.0);
  std::uniform_real_distribution<double> dist(0.0, 900.0);
  std::vector<SensorEvent> ev;
  double t = 0.0;
  for (int i = 0; i < 200; ++i) {
    t += gap(rng);
    ev.push_back({t, dist(rng)});
  }
  const SensorTrace trace(ev, SensorTrace::Mode::Scripted);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
    const double q = ev[i].t + frac(rng) * (ev[i + 1].t - ev[i].t);
    ASSERT_EQ(sensor_at(trace, q).distance_mm, ev[i].distance_mm);
    ASSERT_EQ(sensor_at(trace, ev[i].t).distance_mm, ev[i].distance_mm);
  }
}

TEST(SensorTrace, RejectsBadEvents) {
  using M = SensorTrace::Mode;
  EXPECT_THROW(SensorTrace({{1.0, 10.0}, {1.0, 20.0}}, M::Scripted), std::invalid_argument);
  EXPECT_THROW(SensorTrace({{1.0, 10.0}, {0.5, 20.0}}, M::Scripted), std::invalid_argument);
  EXPECT_THROW(SensorTrace({{1.0, -1.0}}, M::Scripted), std::invalid_argument);
}

TEST(SensorTrace, ManualTracesGrowScriptedOnesDoNot) {
  SensorTrace manual({}, SensorTrace::Mode::Manual);
  manual.append({1.0, 80.0});
  EXPECT_TRUE(sensor_at(manual, 1.0).present);
  EXPECT_THROW(manual.append({1.0, 90.0}), std::invalid_argument);
  SensorTrace scripted = two_step();
  EXPECT_THROW(scripted.append({9.0, 1.0}), std::logic_error);
  EXPECT_EQ(scripted.end_time(), 5.0);
  EXPECT_FALSE(SensorTrace().end_time().has_value());
}

TEST(SensorTraceCsv, ParsesWithHeader) {
  std::istringstream in("t,distance_mm\r\n0,900\r\n\r\n2.5,80\r\n");
  const SensorTrace trace = SensorTrace::from_csv(in);
  ASSERT_EQ(trace.events().size(), 2u);
  EXPECT_EQ(trace.events()[1].t, 2.5);
  EXPECT_EQ(trace.events()[1].distance_mm, 80.0);
  EXPECT_EQ(trace.mode(), SensorTrace::Mode::Scripted);
}

TEST(SensorTraceCsv, ReportsBadInput) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return SensorTrace::from_csv(in);
  };
  EXPECT_THROW(parse(""), std::invalid_argument);
  EXPECT_THROW(parse("time,d\n0,1\n"), std::invalid_argument);
  EXPECT_THROW(parse("t,distance_mm\n0,1,2\n"), std::invalid_argument);
  try {
    parse("t,distance_mm\n0,1\nabc,2\n");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(SensorTrace::load_csv("/nonexistent/trace.csv"), std::invalid_argument);
}

TEST(SensorTraceCsv, ShippedTraceLoads) {
  const SensorTrace trace =
      SensorTrace::load_csv(testing::data_path("scenarios/traces/three_meals.csv"));
  EXPECT_GE(trace.events().size(), 2u);
}

TEST(Serial, DeliveredAfterTheLatency) {
  SerialChannel ch(0.1);
  EXPECT_EQ(ch.send("rice", 1.0), 1.1);
  EXPECT_TRUE(ch.receive(1.05).empty());
  EXPECT_EQ(ch.in_flight(), 1u);
  EXPECT_EQ(ch.receive(1.1), std::vector<std::string>{"rice"});
  EXPECT_TRUE(ch.receive(5.0).empty());
  EXPECT_EQ(ch.in_flight(), 0u);
}

TEST(Serial, SameTimeFramesKeepSendOrder) {
  SerialChannel ch(0.0);
  const std::vector<std::string> sent{"a", "b", "c", "d", "e"};
  for (const auto& s : sent) ch.send(s, 2.0);
  EXPECT_EQ(ch.receive(2.0), sent);
}

TEST(Serial, FrameBounds) {
  SerialChannel ch;
  EXPECT_THROW(ch.send(std::string(300, 'x'), 0.0), std::invalid_argument);
  EXPECT_NO_THROW(ch.send(std::string(kMaxSerialFrameBytes, 'x'), 0.0));
  EXPECT_THROW(ch.send("two\nlines", 0.0), std::invalid_argument);
  EXPECT_THROW(SerialChannel(-1.0), std::invalid_argument);
}

TEST(SerialProperty, ExactlyOnceInSendOrderAcrossThreads) {
  SerialChannel ch(0.25);
  constexpr int kFrames = 2000;
  std::thread producer([&] {
    for (int i = 0; i < kFrames; ++i) ch.send(std::to_string(i), static_cast<double>(i) * 0.001);
  });
  std::vector<std::string> got;
  while (got.size() < static_cast<std::size_t>(kFrames)) {
    for (auto& f : ch.receive(1e9)) got.push_back(std::move(f));
  }
  producer.join();
  ASSERT_EQ(got.size(), static_cast<std::size_t>(kFrames));
  for (int i = 0; i < kFrames; ++i) ASSERT_EQ(got[static_cast<std::size_t>(i)], std::to_string(i));
  EXPECT_EQ(ch.in_flight(), 0u);
}

TEST(Serial, LineHasTwoIndependentDirections) {
  SerialLine line(0.5);
  line.inbound.send("rice", 0.0);
  EXPECT_TRUE(line.outbound.receive(10.0).empty());
  EXPECT_EQ(line.inbound.receive(0.5).size(), 1u);
}

}  // namespace
}  // namespace feedsim
