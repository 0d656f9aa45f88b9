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

// Session setup: food slots, fixed poses and controller timing.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "feedsim/kinematics.hpp"

namespace feedsim {

struct FoodSlot {
  std::string name;
  std::vector<std::string> synonyms;
  JointVector scoop_q;
  JointVector approach_q;  // waypoint above the bowl
  // Bowl position the scoop pose was solved for, when recorded.
  std::optional<Vec3> bowl;
};

struct TimingConfig {
  // Per-command response latency is drawn uniformly from this range.
  double processing_delay_min = 0.93;  // seconds
  double processing_delay_max = 1.13;
  double presence_threshold_mm = 150.0;
  double clear_debounce = 1.5;     // seconds of continuous absence before returning
  double min_present_time = 2.0;   // seconds the spoon stays at the mouth at least
  double scoop_dwell = 1.0;
  double speed_scale = 1.0;
  double no_target_distance_mm = 1000.0;  // sensor value with nothing in range

  void validate() const;
};

// Axis-aligned region of the table the bowls sit on, inches in frame {0}.
struct WorkspaceBox {
  Vec3 min = Vec3::Constant(-1e9);
  Vec3 max = Vec3::Constant(1e9);

  bool contains(const Vec3& p) const;
};

struct Menu {
  std::vector<FoodSlot> slots;
  JointVector mouth_q;
  JointVector idle_q;
  TimingConfig timing;
  WorkspaceBox workspace;

  const FoodSlot* find(std::string_view name) const;

  // Throws std::invalid_argument naming the offending slot or pose: empty
  // menu, duplicate names, poses outside the joint limits, or a scoop pose
  // whose spoon tip leaves the workspace box.
  void validate(const RobotModel& model) const;
};

}  // namespace feedsim
