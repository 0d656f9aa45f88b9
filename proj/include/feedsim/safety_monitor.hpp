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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "feedsim/controller.hpp"

namespace feedsim {

// Checks a telemetry stream frame by frame against the controller's safety
// invariants. Used by the scenario runner and the fuzz tests.
class SafetyMonitor {
 public:
  enum class Check {
    TimeOrder,         // t strictly increasing
    HoldWhilePresent,  // Presenting with user present => q unchanged
    HaltImmobility,    // after a Halted frame, q frozen until reset
    JointLimits,
    ForwardKinematics,  // ee == FK(q) within 1e-9
    ScoopPose,          // Scooping frames sit exactly on the slot's scoop pose
  };
  static constexpr std::size_t kNumChecks = 6;

  SafetyMonitor(const RobotModel& model, const Menu& menu);

  void observe(const TelemetryFrame& frame);
  // Must be called when the controller accepts reset().
  void on_reset();

  bool ok() const { return total_violations() == 0; }
  std::size_t violations(Check c) const { return counts_[static_cast<std::size_t>(c)]; }
  std::size_t total_violations() const;
  std::size_t frames_observed() const { return frames_; }
  // First few violation descriptions, for diagnostics.
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  void flag(Check c, const TelemetryFrame& f, const std::string& what);

  const RobotModel& model_;
  const Menu& menu_;
  std::optional<TelemetryFrame> prev_;
  bool halted_ = false;
  std::size_t frames_ = 0;
  std::size_t counts_[kNumChecks] = {};
  std::vector<std::string> messages_;
};

std::string_view to_string(SafetyMonitor::Check c);

}  // namespace feedsim
