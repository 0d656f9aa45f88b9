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

#include "feedsim/safety_monitor.hpp"

#include <numeric>
#include <variant>

#include "feedsim/csv.hpp"

namespace feedsim {

namespace {

constexpr std::size_t kMaxMessages = 20;
constexpr double kFkTolerance = 1e-9;

}  // namespace

std::string_view to_string(SafetyMonitor::Check c) {
  switch (c) {
    case SafetyMonitor::Check::TimeOrder: return "time_order";
    case SafetyMonitor::Check::HoldWhilePresent: return "hold_while_present";
    case SafetyMonitor::Check::HaltImmobility: return "halt_immobility";
    case SafetyMonitor::Check::JointLimits: return "joint_limits";
    case SafetyMonitor::Check::ForwardKinematics: return "ee_equals_fk";
    case SafetyMonitor::Check::ScoopPose: return "scoop_pose";
  }
  return "?";
}

SafetyMonitor::SafetyMonitor(const RobotModel& model, const Menu& menu)
    : model_(model), menu_(menu) {}

void SafetyMonitor::flag(Check c, const TelemetryFrame& f, const std::string& what) {
  ++counts_[static_cast<std::size_t>(c)];
  if (messages_.size() < kMaxMessages) {
    messages_.push_back("t=" + fixed6(f.t) + " " + std::string(to_string(c)) + ": " + what);
  }
}

std::size_t SafetyMonitor::total_violations() const {
  return std::accumulate(std::begin(counts_), std::end(counts_), std::size_t{0});
}

void SafetyMonitor::on_reset() { halted_ = false; }

void SafetyMonitor::observe(const TelemetryFrame& f) {
  ++frames_;
  if (prev_ && !(f.t > prev_->t)) flag(Check::TimeOrder, f, "time did not advance");

  if (!model_.within_limits(f.q)) flag(Check::JointLimits, f, "joint vector outside limits");

  const Vec3 fk = forward_kinematics(model_, f.q).position;
  if ((fk - f.ee).cwiseAbs().maxCoeff() > kFkTolerance) {
    flag(Check::ForwardKinematics, f, "reported ee differs from FK(q)");
  }

  if (prev_ && f.state == ControllerState::Presenting && f.sensor.present && !(f.q == prev_->q)) {
    flag(Check::HoldWhilePresent, f, "arm moved while the user was at the spoon");
  }

  if (halted_ && prev_ && !(f.q == prev_->q)) flag(Check::HaltImmobility, f, "arm moved after halt");
  if (halted_ && f.state != ControllerState::Halted) {
    flag(Check::HaltImmobility, f, "left Halted without reset");
  }
  if (f.state == ControllerState::Halted) halted_ = true;

  if (f.state == ControllerState::Scooping) {
    const auto* serve = f.active_command ? std::get_if<Serve>(&*f.active_command) : nullptr;
    const FoodSlot* slot = serve ? menu_.find(serve->slot) : nullptr;
    if (slot == nullptr || !(f.q == slot->scoop_q)) {
      flag(Check::ScoopPose, f, "Scooping frame is not at the served slot's scoop pose");
    }
  }
  prev_ = f;
}

}  // namespace feedsim
