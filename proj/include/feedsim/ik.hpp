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

// Position inverse kinematics by damped least squares.
//
// Each iteration solves  dq = J^T (J J^T + lambda^2 I)^-1 e  for the position
// error e (plus one pitch row when a spoon attitude is requested), caps the
// step norm, clamps to joint limits and accepts the step only if the error
// norm strictly decreases. A rejected step doubles lambda and is retried; an
// accepted one halves it down to a floor.

#pragma once

#include <optional>
#include <vector>

#include "feedsim/kinematics.hpp"

namespace feedsim {

struct IKOptions {
  double initial_damping = 0.5;  // degree units
  double min_damping = 1e-3;
  double max_damping = 1e6;      // retries stop here and the solve stalls
  double max_step_norm = 10.0;   // degrees per iteration
  double pitch_tolerance = 0.5;  // degrees, for the optional pitch row
};

struct IKRequest {
  Vec3 target = Vec3::Zero();
  JointVector seed;
  // Desired theta_2 + theta_3 + theta_4, which fixes the spoon attitude in
  // the arm's vertical plane.
  std::optional<double> pitch_constraint;
  double tol = 0.05;  // inches
  int max_iter = 200;
};

struct IKResult {
  JointVector q;
  Vec3 achieved = Vec3::Zero();
  double residual = 0.0;  // |achieved - target|, inches
  int iterations = 0;
  bool converged = false;
  // False when the target lies beyond the arm's reach; no iteration happens.
  bool reachable = true;
  // Signed pitch error in degrees when a pitch constraint was requested.
  std::optional<double> pitch_error;
  // Objective value after the seed and after every accepted step.
  std::vector<double> objective_history;
};

// Throws std::invalid_argument on a non-finite target, a seed outside the
// joint limits, tol <= 0 or max_iter < 1.
IKResult solve_ik(const RobotModel& model, const IKRequest& req, const IKOptions& opts = {});

JointVector snap_to_limits(const RobotModel& model, const JointVector& q);

// Sum of the three pitch joints (shoulder, elbow, wrist).
double spoon_pitch(const JointVector& q);

}  // namespace feedsim
