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

// The feeding state machine.
//
//   Idle --serve--> MovingToScoop -> Scooping -> MovingToMouth -> Presenting
//     ^                                                               |
//     +------------------------- Returning <--------------------------+
//
// The controller is tick driven: submit() only queues, step() applies the
// queue and advances time. A serve command starts moving after a randomized
// processing delay that models the phone-to-arm link. Stop aborts any serve
// episode into Returning; EmergencyStop freezes the arm in Halted until
// reset().
//
// While Presenting the spoon holds still at the mouth pose. It leaves only
// after min_present_time has elapsed and the sensor has reported no user for
// clear_debounce seconds straight.
//
// Not thread-safe: callers serialize submit(), step() and reset().

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "feedsim/command.hpp"
#include "feedsim/kinematics.hpp"
#include "feedsim/menu.hpp"
#include "feedsim/trajectory.hpp"

namespace feedsim {

struct TelemetryFrame {
  double t = 0.0;  // simulated seconds
  ControllerState state = ControllerState::Idle;
  JointVector q;
  Vec3 ee = Vec3::Zero();
  SensorReading sensor;
  std::optional<Command> active_command;
};

struct Ack {
  bool accepted = false;
  std::string reason;  // empty when accepted

  static Ack ok() { return {true, {}}; }
  static Ack rejected(std::string why) { return {false, std::move(why)}; }
};

// Uniform draws in [lo, hi] built on mt19937_64 output bits so the sequence
// is identical across standard libraries.
class DelaySampler {
 public:
  explicit DelaySampler(std::uint64_t seed) : rng_(seed) {}
  double draw(double lo, double hi);

 private:
  std::mt19937_64 rng_;
};

class Controller {
 public:
  // Validates the model and menu; throws std::invalid_argument on failure.
  Controller(RobotModel model, Menu menu, std::uint64_t seed = 0, double t0 = 0.0);

  Ack submit(const Command& cmd);
  // `now` must be strictly later than the previous tick; otherwise throws
  // std::logic_error.
  TelemetryFrame step(double now, const SensorReading& sensor);
  // Allowed from Halted or Idle only.
  Ack reset();

  ControllerState state() const { return state_; }
  const JointVector& q() const { return q_; }
  double time() const { return t_; }
  const TelemetryFrame& last_frame() const { return last_frame_; }
  const RobotModel& model() const { return model_; }
  const Menu& menu() const { return menu_; }

  // Sensor reading as the controller sees it: presence is re-derived from the
  // distance and the configured threshold, then any override is applied.
  SensorReading effective_sensor(const SensorReading& raw) const;

 private:
  struct Pending {
    Command cmd;
    double submitted_at;
    double delay;  // serve only
  };

  void apply(const Pending& p, double now);
  void advance(double prev_t, double now, const SensorReading& sensor);
  void start_motion(ControllerState s, std::vector<JointVector> waypoints, double start);
  void begin_return(double now);
  TelemetryFrame make_frame(double now, const SensorReading& sensor) const;

  RobotModel model_;
  Menu menu_;
  DelaySampler delays_;

  ControllerState state_ = ControllerState::Idle;
  JointVector q_;
  double t_ = 0.0;
  std::vector<Pending> queue_;
  bool serve_pending_ = false;
  bool halt_pending_ = false;
  std::optional<bool> presence_override_;
  std::optional<Command> active_;

  Path motion_;
  double motion_start_ = 0.0;
  double phase_start_ = 0.0;  // Scooping / Presenting entry time
  std::optional<double> absent_since_;
  std::optional<std::size_t> slot_index_;

  TelemetryFrame last_frame_;
};

}  // namespace feedsim
