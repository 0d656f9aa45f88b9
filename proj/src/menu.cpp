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

#include "feedsim/menu.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace feedsim {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void require_pose(const RobotModel& model, const JointVector& q, const std::string& what) {
  require(q.is_finite() && model.within_limits(q), what + " is outside the joint limits");
}

}  // namespace

void TimingConfig::validate() const {
  auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  require(nonneg(processing_delay_min) && nonneg(processing_delay_max) &&
              processing_delay_min <= processing_delay_max,
          "timing: processing delay range must satisfy 0 <= min <= max");
  require(nonneg(presence_threshold_mm), "timing: presence_threshold_mm must be >= 0");
  require(nonneg(clear_debounce), "timing: clear_debounce must be >= 0");
  require(nonneg(min_present_time), "timing: min_present_time must be >= 0");
  require(nonneg(scoop_dwell), "timing: scoop_dwell must be >= 0");
  require(speed_scale > 0.0 && speed_scale <= 1.0, "timing: speed_scale must lie in (0, 1]");
  require(nonneg(no_target_distance_mm) && no_target_distance_mm >= presence_threshold_mm,
          "timing: no_target_distance_mm must be >= presence_threshold_mm");
}

bool WorkspaceBox::contains(const Vec3& p) const {
  return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
}

const FoodSlot* Menu::find(std::string_view name) const {
  for (const auto& s : slots) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

void Menu::validate(const RobotModel& model) const {
  require(!slots.empty(), "menu must contain at least one food slot");
  timing.validate();
  require((workspace.min.array() <= workspace.max.array()).all(),
          "workspace box min must be <= max");
  require_pose(model, mouth_q, "mouth_q");
  require_pose(model, idle_q, "idle_q");

  std::set<std::string> names;
  for (const auto& s : slots) {
    require(!s.name.empty(), "food slot name must be non-empty");
    require(names.insert(s.name).second, "duplicate food slot name '" + s.name + "'");
    require_pose(model, s.scoop_q, "slot '" + s.name + "' scoop_q");
    require_pose(model, s.approach_q, "slot '" + s.name + "' approach_q");
    require(workspace.contains(forward_kinematics(model, s.scoop_q).position),
            "slot '" + s.name + "' scoop pose leaves the workspace box");
  }
}

}  // namespace feedsim
