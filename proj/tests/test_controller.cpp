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


#include <algorithm>
#include <functional>
#include <numeric>

#include <gtest/gtest.h>

#include "feedsim/controller.hpp"
#include "feedsim/safety_monitor.hpp"
#include "support/fuzz.hpp"
#include "support/oracles.hpp"

namespace feedsim {
namespace {

constexpr double kDt = 0.02;
constexpr double kFar = 1000.0;
constexpr double kNear = 60.0;

struct Driver {
  explicit Driver(std::uint64_t seed = 0)
      : model(testing::default_model()), menu(testing::default_menu()), ctl(model, menu, seed),
        monitor(model, menu) {
    monitor.observe(ctl.last_frame());
  }

  TelemetryFrame tick(double distance) {
    ++ticks;
    const double t = static_cast<double>(ticks) * kDt;
    const TelemetryFrame f = ctl.step(t, SensorReading{t, distance, false});
    monitor.observe(f);
    frames.push_back(f);
    return f;
  }

  // Ticks until `done` holds for the newest frame; fails the test after
  // `limit` simulated seconds.
  TelemetryFrame run_until(const std::function<bool(const TelemetryFrame&)>& done,
                           double distance, double limit = 120.0) {
    const double stop_at = ctl.time() + limit;
    while (ctl.time() < stop_at) {
      const TelemetryFrame f = tick(distance);
      if (done(f)) return f;
    }
    ADD_FAILURE() << "condition not reached within " << limit << " s";
    return ctl.last_frame();
  }

  TelemetryFrame run_until_state(ControllerState s, double distance, double limit = 120.0) {
    return run_until([s](const TelemetryFrame& f) { return f.state == s; }, distance, limit);
  }

  void run_for(double seconds, double distance) {
    const double until = ctl.time() + seconds;
    while (ctl.time() + 1e-9 < until) tick(distance);
  }

  RobotModel model;
  Menu menu;
  Controller ctl;
  SafetyMonitor monitor;
  std::vector<TelemetryFrame> frames;
  std::uint64_t ticks = 0;
};

TEST(Controller, StartsIdleAtTheIdlePose) {
  Driver d;
  EXPECT_EQ(d.ctl.state(), ControllerState::Idle);
  EXPECT_EQ(d.ctl.q(), d.menu.idle_q);
  EXPECT_FALSE(d.ctl.last_frame().active_command.has_value());
}

TEST(Controller, ServeStartsAnEpisodeAfterTheProcessingDelay) {
  Driver d;
  ASSERT_TRUE(d.ctl.submit(Serve{"rice"}).accepted);
  const TelemetryFrame f = d.tick(kFar);
  EXPECT_EQ(f.state, ControllerState::MovingToScoop);
  EXPECT_EQ(f.active_command, Command{Serve{"rice"}});
  const TelemetryFrame moved =
      d.run_until([&](const TelemetryFrame& x) { return !(x.q == d.menu.idle_q); }, kFar);
  EXPECT_GE(moved.t, d.menu.timing.processing_delay_min);
  EXPECT_LE(moved.t, d.menu.timing.processing_delay_max + kDt + 1e-9);
}

TEST(Controller, SecondServeWhileBusyIsRejected) {
  Driver d;
  ASSERT_TRUE(d.ctl.submit(Serve{"rice"}).accepted);
  const Ack same_tick = d.ctl.submit(Serve{"salad"});
  EXPECT_FALSE(same_tick.accepted);
  EXPECT_EQ(same_tick.reason, "busy");
  d.tick(kFar);
  const Ack later = d.ctl.submit(Serve{"salad"});
  EXPECT_FALSE(later.accepted);
  EXPECT_EQ(later.reason, "busy");
}

TEST(Controller, UnknownSlotIsRejected) {
  Driver d;
  const Ack a = d.ctl.submit(Serve{"caviar"});
  EXPECT_FALSE(a.accepted);
  EXPECT_NE(a.reason.find("caviar"), std::string::npos);
}

TEST(Controller, FullEpisodeVisitsEveryPhaseInOrder) {
  Driver d;
  ASSERT_TRUE(d.ctl.submit(Serve{"salad"}).accepted);
  d.run_until_state(ControllerState::Presenting, kFar);
  d.run_until_state(ControllerState::Idle, kFar);
  std::vector<ControllerState> seen;
  for (const auto& f : d.frames) {
    if (seen.empty() || seen.back() != f.state) seen.push_back(f.state);
  }
  const std::vector<ControllerState> expected{
      ControllerState::MovingToScoop, ControllerState::Scooping,  ControllerState::MovingToMouth,
      ControllerState::Presenting,    ControllerState::Returning, ControllerState::Idle};
  EXPECT_EQ(seen, expected);
  EXPECT_EQ(d.ctl.q(), d.menu.idle_q);
  EXPECT_FALSE(d.ctl.last_frame().active_command.has_value());
  EXPECT_TRUE(d.monitor.ok());
}

TEST(Controller, ScoopingSitsExactlyOnTheScoopPose) {
  Driver d;
  ASSERT_TRUE(d.ctl.submit(Serve{"beans"}).accepted);
  d.run_until_state(ControllerState::MovingToMouth, kFar);
  std::size_t scooping = 0;
  for (const auto& f : d.frames) {
    if (f.state != ControllerState::Scooping) continue;
    ++scooping;
    EXPECT_EQ(f.q, d.menu.find("beans")->scoop_q);
  }
  EXPECT_NEAR(static_cast<double>(scooping) * kDt, d.menu.timing.scoop_dwell, 2 * kDt);
}

TEST(Controller, HoldsAtTheMouthForAMinuteWhileTheUserStays) {
  Driver d;
  ASSERT_TRUE(d.ctl.submit(Serve{"rice"}).accepted);
  d.run_until_state(ControllerState::Presenting, kNear);
  const std::size_t from = d.frames.size();
  d.run_for(60.0, kNear);
  for (std::size_t i = from; i < d.frames.size(); ++i) {
    ASSERT_EQ(d.frames[i].state, ControllerState::Presenting);
    ASSERT_EQ(d.frames[i].q, d.menu.mouth_q);
  }
  EXPECT_TRUE(d.monitor.ok());
}

TEST(Controller, LeavesOnlyAfterTheClearDebounce) {
  Driver d;
  ASSERT_TRUE(d.ctl.submit(Serve{"rice"}).accepted);
  d.run_until_state(ControllerState::Presenting, kNear);
  d.run_for(5.0, kNear);
  d.run_for(1.0, kFar);
  d.run_for(1.0, kNear);
  EXPECT_EQ(d.ctl.state(), ControllerState::Presenting);
  const double cleared_at = d.ctl.time();
  const TelemetryFrame f = d.run_until_state(ControllerState::Returning, kFar);
  EXPECT_NEAR(f.t - cleared_at, d.menu.timing.clear_debounce + kDt, kDt + 1e-9);
}

TEST(Controller, PresentsAtLeastTheMinimumTimeWithNobodyThere) {
  Driver d;
  ASSERT_TRUE(d.ctl.submit(Serve{"rice"}).accepted);
  const TelemetryFrame arrived = d.run_until_state(ControllerState::Presenting, kFar);
  const TelemetryFrame left = d.run_until_state(ControllerState::Returning, kFar);
  const double expected = std::max(d.menu.timing.min_present_time, d.menu.timing.clear_debounce);
  EXPECT_GE(left.t - arrived.t, expected - kDt - 1e-9);
  EXPECT_LE(left.t - arrived.t, expected + kDt + 1e-9);
}

TEST(Controller, StopAbortsIntoReturning) {
  Driver d;
  ASSERT_TRUE(d.ctl.submit(Serve{"rice"}).accepted);
  d.run_until_state(ControllerState::MovingToMouth, kFar);
  d.tick(kFar);
  ASSERT_TRUE(d.ctl.submit(Stop{}).accepted);
  const TelemetryFrame f = d.tick(kFar);
  EXPECT_EQ(f.state, ControllerState::Returning);
  EXPECT_EQ(f.active_command, Command{Stop{}});
  d.run_until_state(ControllerState::Idle, kFar);
  EXPECT_EQ(d.ctl.q(), d.menu.idle_q);
  EXPECT_TRUE(d.ctl.submit(Serve{"salad"}).accepted);
}

TEST(Controller, StopWhileIdleChangesNothing) {
  Driver d;
  ASSERT_TRUE(d.ctl.submit(Stop{}).accepted);
  const TelemetryFrame f = d.tick(kFar);
  EXPECT_EQ(f.state, ControllerState::Idle);
  EXPECT_EQ(f.q, d.menu.idle_q);
}

TEST(Controller, EmergencyStopFreezesUntilReset) {
  Driver d;
  ASSERT_TRUE(d.ctl.submit(Serve{"rice"}).accepted);
  d.run_until([&](const TelemetryFrame& f) { return f.state == ControllerState::MovingToScoop &&
                                                    !(f.q == d.menu.idle_q); },
              kFar);
  d.run_for(0.5, kFar);
  ASSERT_TRUE(d.ctl.submit(EmergencyStop{}).accepted);
  const TelemetryFrame halted = d.tick(kFar);
  EXPECT_EQ(halted.state, ControllerState::Halted);
  const JointVector frozen = halted.q;
  EXPECT_FALSE(frozen == d.menu.idle_q);

  EXPECT_EQ(d.ctl.submit(Serve{"salad"}).reason, "halted");
  d.ctl.submit(Stop{});
  d.run_for(30.0, kNear);
  for (const auto& f : d.frames) {
    if (f.t >= halted.t) ASSERT_EQ(f.q, frozen);
  }

  ASSERT_TRUE(d.ctl.reset().accepted);
  d.monitor.on_reset();
  EXPECT_EQ(d.ctl.state(), ControllerState::Idle);
  EXPECT_EQ(d.ctl.q(), d.menu.idle_q);
  EXPECT_TRUE(d.ctl.submit(Serve{"salad"}).accepted);
  d.run_until_state(ControllerState::Idle, kFar);
  EXPECT_TRUE(d.monitor.ok());
}

TEST(Controller, EmergencyStopTakesEffectOnTheNextTick) {
  Driver d;
  ASSERT_TRUE(d.ctl.submit(Serve{"beans"}).accepted);
  d.run_until_state(ControllerState::MovingToMouth, kFar);
  const JointVector before = d.ctl.q();
  d.ctl.submit(EmergencyStop{});
  const TelemetryFrame f = d.tick(kFar);
  EXPECT_EQ(f.state, ControllerState::Halted);
  EXPECT_EQ(f.q, before);
}

TEST(Controller, ResetIsRefusedWhileMoving) {
  Driver d;
  ASSERT_TRUE(d.ctl.submit(Serve{"rice"}).accepted);
  d.tick(kFar);
  const Ack a = d.ctl.reset();
  EXPECT_FALSE(a.accepted);
  EXPECT_EQ(a.reason, "moving");
  EXPECT_TRUE(d.ctl.reset().accepted == false);
}

TEST(Controller, PresenceOverrideBeatsTheSensor) {
  Driver d;
  d.ctl.submit(PresenceOverride{true});
  EXPECT_TRUE(d.tick(kFar).sensor.present);
  d.ctl.submit(PresenceOverride{false});
  EXPECT_FALSE(d.tick(kNear).sensor.present);
}

TEST(Controller, PresenceIsDerivedFromTheThreshold) {
  Driver d;
  const double th = d.menu.timing.presence_threshold_mm;
  EXPECT_TRUE(d.ctl.effective_sensor({0.0, th - 1e-6, false}).present);
  EXPECT_FALSE(d.ctl.effective_sensor({0.0, th, true}).present);
}

TEST(Controller, TimeMustMoveForward) {
  Driver d;
  d.tick(kFar);
  EXPECT_THROW(d.ctl.step(d.ctl.time(), SensorReading{}), std::logic_error);
  EXPECT_THROW(d.ctl.step(d.ctl.time() - 1.0, SensorReading{}), std::logic_error);
  EXPECT_THROW(d.ctl.step(d.ctl.time() + 1.0, SensorReading{0.0, -1.0, false}),
               std::invalid_argument);
}

TEST(Controller, OneLongTickChainsThroughPhases) {
  Driver d;
  ASSERT_TRUE(d.ctl.submit(Serve{"rice"}).accepted);
  const TelemetryFrame first = d.ctl.step(60.0, SensorReading{60.0, kFar, false});
  EXPECT_EQ(first.state, ControllerState::MovingToScoop);
  EXPECT_EQ(first.q, d.menu.find("rice")->scoop_q);
  const TelemetryFrame f = d.ctl.step(120.0, SensorReading{120.0, kFar, false});
  EXPECT_EQ(f.state, ControllerState::Presenting);
  EXPECT_EQ(f.q, d.menu.mouth_q);
}

TEST(Controller, RejectsInvalidMenus) {
  Menu menu = testing::default_menu();
  menu.mouth_q[1] = 0.0;
  EXPECT_THROW(Controller(testing::default_model(), menu), std::invalid_argument);
}

TEST(DelaySampler, DeterministicAndInRange) {
  DelaySampler a(7);
  DelaySampler b(7);
  DelaySampler c(8);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.draw(0.93, 1.13);
    ASSERT_EQ(x, b.draw(0.93, 1.13));
    ASSERT_GE(x, 0.93);
    ASSERT_LT(x, 1.13);
    differs |= x != c.draw(0.93, 1.13);
  }
  EXPECT_TRUE(differs);
}

TEST(DelaySampler, PinnedFirstDrawForSeedZero) {
  // mt19937_64 with the default seed value emits 14514284786278117030 first.
  std::mt19937_64 ref(0);
  const double expected = static_cast<double>(ref() >> 11) * 0x1.0p-53;
  DelaySampler s(0);
  EXPECT_EQ(s.draw(0.0, 1.0), expected);
}

TEST(Controller, MeanLatencyMatchesTheConfiguredRange) {
  Driver d;
  std::vector<double> latencies;
  for (int i = 0; i < 50; ++i) {
    const double submitted = d.ctl.time();
    ASSERT_TRUE(d.ctl.submit(Serve{d.menu.slots[static_cast<std::size_t>(i) % 3].name}).accepted);
    const TelemetryFrame moved =
        d.run_until([&](const TelemetryFrame& f) { return !(f.q == d.menu.idle_q); }, kFar);
    latencies.push_back(moved.t - submitted);
    d.run_until_state(ControllerState::Idle, kFar);
  }
  const double mean = std::accumulate(latencies.begin(), latencies.end(), 0.0) /
                      static_cast<double>(latencies.size());
  EXPECT_NEAR(mean, 1.03, 0.05);
  EXPECT_GE(*std::min_element(latencies.begin(), latencies.end()), 0.93);
}

TEST(Controller, CommandNamesAndStates) {
  EXPECT_EQ(describe(Serve{"rice"}), "serve:rice");
  EXPECT_EQ(describe(Stop{}), "stop");
  EXPECT_EQ(describe(EmergencyStop{}), "emergency_stop");
  EXPECT_EQ(describe(PresenceOverride{true}), "presence:on");
  for (auto s : {ControllerState::Idle, ControllerState::MovingToScoop, ControllerState::Scooping,
                 ControllerState::MovingToMouth, ControllerState::Presenting,
                 ControllerState::Returning, ControllerState::Halted}) {
    EXPECT_EQ(parse_controller_state(to_string(s)), s);
  }
  EXPECT_FALSE(parse_controller_state("Dancing").has_value());
}

TEST(SafetyProperty, FuzzedRunsNeverViolateTheInvariants) {
  const RobotModel model = testing::default_model();
  const Menu menu = testing::default_menu();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto stats = testing::run_fuzz(model, menu, 20000, seed);
    EXPECT_EQ(stats.violations, 0u) << (stats.messages.empty() ? "" : stats.messages.front());
    EXPECT_GT(stats.serves_accepted, 5u);
    EXPECT_GT(stats.presenting_frames, 0u);
    EXPECT_GT(stats.halts, 0u);
  }
}

TelemetryFrame frame_at(const RobotModel& m, double t, ControllerState s, const JointVector& q,
                        bool present) {
  return {t, s, q, forward_kinematics(m, q).position, SensorReading{t, present ? 50.0 : 900.0, present},
          std::nullopt};
}

TEST(SafetyMonitor, FlagsEachKindOfViolation) {
  const RobotModel m = testing::default_model();
  const Menu menu = testing::default_menu();
  const JointVector a = menu.mouth_q;
  JointVector b = a;
  b[0] += 1.0;

  {
    SafetyMonitor mon(m, menu);
    mon.observe(frame_at(m, 1.0, ControllerState::Presenting, a, true));
    mon.observe(frame_at(m, 1.0, ControllerState::Presenting, a, true));
    EXPECT_EQ(mon.violations(SafetyMonitor::Check::TimeOrder), 1u);
  }
  {
    SafetyMonitor mon(m, menu);
    mon.observe(frame_at(m, 1.0, ControllerState::Presenting, a, true));
    mon.observe(frame_at(m, 1.1, ControllerState::Presenting, b, true));
    EXPECT_EQ(mon.violations(SafetyMonitor::Check::HoldWhilePresent), 1u);
  }
  {
    SafetyMonitor mon(m, menu);
    mon.observe(frame_at(m, 1.0, ControllerState::Halted, a, false));
    mon.observe(frame_at(m, 1.1, ControllerState::Halted, b, false));
    EXPECT_GE(mon.violations(SafetyMonitor::Check::HaltImmobility), 1u);
    mon.on_reset();
    mon.observe(frame_at(m, 1.2, ControllerState::Idle, menu.idle_q, false));
    EXPECT_EQ(mon.violations(SafetyMonitor::Check::HaltImmobility), 1u);
  }
  {
    SafetyMonitor mon(m, menu);
    JointVector out = a;
    out[1] = 0.0;
    mon.observe(frame_at(m, 1.0, ControllerState::Returning, out, false));
    EXPECT_EQ(mon.violations(SafetyMonitor::Check::JointLimits), 1u);
  }
  {
    SafetyMonitor mon(m, menu);
    TelemetryFrame f = frame_at(m, 1.0, ControllerState::Returning, a, false);
    f.ee.x() += 1e-6;
    mon.observe(f);
    EXPECT_EQ(mon.violations(SafetyMonitor::Check::ForwardKinematics), 1u);
    EXPECT_FALSE(mon.messages().empty());
  }
}

}  // namespace
}  // namespace feedsim
