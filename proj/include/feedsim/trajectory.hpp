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

// Servo-limited joint-space trajectories.
//
// A segment moves every joint linearly from q_start to q_end so that all
// joints arrive together; its duration is set by the slowest joint relative
// to its speed limit.

#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "feedsim/kinematics.hpp"

namespace feedsim {

inline constexpr double kDefaultSampleDt = 0.02;  // seconds, 50 Hz

struct TrajectoryPoint {
  double t = 0.0;  // seconds from segment start
  JointVector q;
  Vec3 ee = Vec3::Zero();
};

struct Segment {
  JointVector q_start;
  JointVector q_end;
  double duration = 0.0;  // seconds

  // Joint vector at time t. Returns q_start for t <= 0 and q_end for
  // t >= duration, bit-exactly.
  JointVector at(double t) const;
};

// Rejects endpoints outside the joint limits and speed_scale outside (0, 1].
Segment plan_segment(const RobotModel& model, const JointVector& q_start, const JointVector& q_end,
                     double speed_scale = 1.0);

// Points at t = 0, dt, 2dt, ... and a final point at exactly `duration`.
std::vector<TrajectoryPoint> sample(const RobotModel& model, const Segment& segment,
                                    double dt = kDefaultSampleDt);

// Extends a sampled trajectory with `hold` seconds of stationary points at its
// final pose, continuing the dt cadence.
void append_hold(const RobotModel& model, std::vector<TrajectoryPoint>& points, double hold,
                 double dt = kDefaultSampleDt);

// Chain of segments through a list of waypoints, played back to back.
class Path {
 public:
  Path() = default;
  explicit Path(std::vector<Segment> segments);

  double duration() const { return duration_; }
  const std::vector<Segment>& segments() const { return segments_; }
  JointVector at(double t) const;
  const JointVector& end() const { return segments_.back().q_end; }
  bool empty() const { return segments_.empty(); }

 private:
  std::vector<Segment> segments_;
  double duration_ = 0.0;
};

Path plan_path(const RobotModel& model, std::span<const JointVector> waypoints,
               double speed_scale = 1.0);

// `t,q1,q2,q3,q4,q5,x,y,z` with six decimals per value.
void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryPoint> points);

}  // namespace feedsim
