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

#include "feedsim/controller.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace feedsim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::array<std::pair<ControllerState, std::string_view>, 7> kStateNames{{
    {ControllerState::Idle, "Idle"},
    {ControllerState::MovingToScoop, "MovingToScoop"},
    {ControllerState::Scooping, "Scooping"},
    {ControllerState::MovingToMouth, "MovingToMouth"},
    {ControllerState::Presenting, "Presenting"},
    {ControllerState::Returning, "Returning"},
    {ControllerState::Halted, "Halted"},
}};

}  // namespace

std::string describe(const Command& cmd) {
  return std::visit(Overloaded{
                        [](const Serve& s) { return "serve:" + s.slot; },
                        [](const Stop&) { return std::string("stop"); },
                        [](const EmergencyStop&) { return std::string("emergency_stop"); },
                        [](const PresenceOverride& p) {
                          return std::string(p.present ? "presence:on" : "presence:off");
                        },
                    },
                    cmd);
}

std::string_view to_string(ControllerState s) {
  for (const auto& [state, name] : kStateNames) {
    if (state == s) return name;
  }
  return "?";
}

std::optional<ControllerState> parse_controller_state(std::string_view name) {
  for (const auto& [state, n] : kStateNames) {
    if (n == name) return state;
  }
  return std::nullopt;
}

double DelaySampler::draw(double lo, double hi) {
  // 53 random mantissa bits -> [0, 1).
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

Controller::Controller(RobotModel model, Menu menu, std::uint64_t seed, double t0)
    : model_(std::move(model)), menu_(std::move(menu)), delays_(seed) {
  model_.validate();
  menu_.validate(model_);
  q_ = menu_.idle_q;
  t_ = t0;
  last_frame_ = make_frame(t0, SensorReading{t0, menu_.timing.no_target_distance_mm, false});
}

Ack Controller::submit(const Command& cmd) {
  if (const auto* serve = std::get_if<Serve>(&cmd)) {
    if (menu_.find(serve->slot) == nullptr) return Ack::rejected("unknown slot '" + serve->slot + "'");
    if (state_ == ControllerState::Halted || halt_pending_) return Ack::rejected("halted");
    if (state_ != ControllerState::Idle || serve_pending_) return Ack::rejected("busy");
    const double delay =
        delays_.draw(menu_.timing.processing_delay_min, menu_.timing.processing_delay_max);
    queue_.push_back({cmd, t_, delay});
    serve_pending_ = true;
    return Ack::ok();
  }
  if (std::holds_alternative<EmergencyStop>(cmd)) halt_pending_ = true;
  queue_.push_back({cmd, t_, 0.0});
  return Ack::ok();
}

SensorReading Controller::effective_sensor(const SensorReading& raw) const {
  if (presence_override_) {
    const bool present = *presence_override_;
    return {raw.t, present ? 0.0 : menu_.timing.no_target_distance_mm, present};
  }
  return {raw.t, raw.distance_mm, raw.distance_mm < menu_.timing.presence_threshold_mm};
}

TelemetryFrame Controller::step(double now, const SensorReading& raw) {
  if (!(now > t_)) {
    throw std::logic_error("controller time must increase strictly (got " + std::to_string(now) +
                           " after " + std::to_string(t_) + ")");
  }
  if (raw.distance_mm < 0.0) throw std::invalid_argument("sensor distance must be >= 0");
  const double prev_t = t_;
  for (const Pending& p : std::exchange(queue_, {})) apply(p, now);
  serve_pending_ = false;
  halt_pending_ = false;

  const SensorReading sensor = effective_sensor(raw);
  advance(prev_t, now, sensor);
  t_ = now;
  last_frame_ = make_frame(now, sensor);
  return last_frame_;
}

Ack Controller::reset() {
  if (state_ != ControllerState::Halted && state_ != ControllerState::Idle) {
    return Ack::rejected("moving");
  }
  state_ = ControllerState::Idle;
  q_ = menu_.idle_q;
  queue_.clear();
  serve_pending_ = false;
  halt_pending_ = false;
  active_.reset();
  slot_index_.reset();
  motion_ = Path();
  last_frame_ = make_frame(t_, last_frame_.sensor);
  return Ack::ok();
}

void Controller::apply(const Pending& p, double now) {
  std::visit(
      Overloaded{
          [&](const Serve& s) {
            if (state_ != ControllerState::Idle) return;
            for (std::size_t i = 0; i < menu_.slots.size(); ++i) {
              if (menu_.slots[i].name == s.slot) slot_index_ = i;
            }
            const FoodSlot& slot = menu_.slots[*slot_index_];
            active_ = p.cmd;
            start_motion(ControllerState::MovingToScoop, {q_, slot.approach_q, slot.scoop_q},
                         p.submitted_at + p.delay);
          },
          [&](const Stop&) {
            switch (state_) {
              case ControllerState::MovingToScoop:
              case ControllerState::Scooping:
              case ControllerState::MovingToMouth:
              case ControllerState::Presenting:
                active_ = p.cmd;
                begin_return(now);
                break;
              default:
                break;
            }
          },
          [&](const EmergencyStop&) {
            state_ = ControllerState::Halted;
            active_ = p.cmd;
            motion_ = Path();
          },
          [&](const PresenceOverride& o) { presence_override_ = o.present; },
      },
      p.cmd);
}

void Controller::start_motion(ControllerState s, std::vector<JointVector> waypoints,
                              double start) {
  state_ = s;
  motion_ = plan_path(model_, waypoints, menu_.timing.speed_scale);
  motion_start_ = start;
}

void Controller::begin_return(double now) {
  start_motion(ControllerState::Returning, {q_, menu_.idle_q}, now);
}

void Controller::advance(double prev_t, double now, const SensorReading& sensor) {
  const TimingConfig& timing = menu_.timing;
  // Each pass either settles q_ for `now` or moves to the next phase; a tick
  // longer than several phases simply chains through them.
  for (;;) {
    switch (state_) {
      case ControllerState::Idle:
      case ControllerState::Halted:
        return;

      case ControllerState::MovingToScoop:
      case ControllerState::MovingToMouth:
      case ControllerState::Returning: {
        const double end = motion_start_ + motion_.duration();
        // The frame that reaches the end pose still carries the motion state;
        // the successor starts on the following tick, anchored at `end`.
        if (prev_t >= end) {
          q_ = motion_.end();
          if (state_ == ControllerState::MovingToScoop) {
            state_ = ControllerState::Scooping;
            phase_start_ = end;
          } else if (state_ == ControllerState::MovingToMouth) {
            state_ = ControllerState::Presenting;
            phase_start_ = end;
            absent_since_.reset();
          } else {
            state_ = ControllerState::Idle;
            active_.reset();
            slot_index_.reset();
            return;
          }
          continue;
        }
        q_ = motion_.at(now - motion_start_);
        return;
      }

      case ControllerState::Scooping: {
        const FoodSlot& slot = menu_.slots[*slot_index_];
        q_ = slot.scoop_q;
        const double end = phase_start_ + timing.scoop_dwell;
        if (now < end) return;
        start_motion(ControllerState::MovingToMouth, {slot.scoop_q, slot.approach_q, menu_.mouth_q},
                     end);
        continue;
      }

      case ControllerState::Presenting: {
        q_ = menu_.mouth_q;
        if (sensor.present) {
          absent_since_.reset();
          return;
        }
        if (!absent_since_) absent_since_ = now;
        if (now - phase_start_ >= timing.min_present_time &&
            now - *absent_since_ >= timing.clear_debounce) {
          begin_return(now);
        }
        return;
      }
    }
  }
}

TelemetryFrame Controller::make_frame(double now, const SensorReading& sensor) const {
  return {now, state_, q_, forward_kinematics(model_, q_).position, sensor, active_};
}

}  // namespace feedsim
