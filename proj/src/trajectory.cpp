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

#include "feedsim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "feedsim/csv.hpp"

namespace feedsim {

namespace {

// Sample times closer than this to the segment end are folded into the exact
// final point.
constexpr double kTimeEpsilon = 1e-9;

void require_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be > 0");
}

}  // namespace

JointVector Segment::at(double t) const {
  if (t <= 0.0) return q_start;
  if (t >= duration) return q_end;
  const double s = t / duration;
  JointVector q;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const double a = q_start[j];
    const double b = q_end[j];
    // Clamp to the endpoint interval so rounding never leaves the limit box.
    q[j] = std::clamp(a + s * (b - a), std::min(a, b), std::max(a, b));
  }
  return q;
}

Segment plan_segment(const RobotModel& model, const JointVector& q_start, const JointVector& q_end,
                     double speed_scale) {
  if (!(speed_scale > 0.0 && speed_scale <= 1.0)) {
    throw std::invalid_argument("speed_scale must lie in (0, 1]");
  }
  if (!q_start.is_finite() || !model.within_limits(q_start)) {
    throw std::invalid_argument("segment start is outside the joint limits");
  }
  if (!q_end.is_finite() || !model.within_limits(q_end)) {
    throw std::invalid_argument("segment end is outside the joint limits");
  }
  Segment seg{q_start, q_end, 0.0};
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const double speed = model.max_joint_speed[j] * speed_scale;
    seg.duration = std::max(seg.duration, std::abs(q_end[j] - q_start[j]) / speed);
  }
  return seg;
}

std::vector<TrajectoryPoint> sample(const RobotModel& model, const Segment& segment, double dt) {
  require_dt(dt);
  std::vector<TrajectoryPoint> points;
  auto push = [&](double t, const JointVector& q) {
    points.push_back({t, q, forward_kinematics(model, q).position});
  };
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (segment.duration - t < kTimeEpsilon) break;
    push(t, segment.at(t));
  }
  push(segment.duration, segment.q_end);
  return points;
}

void append_hold(const RobotModel& model, std::vector<TrajectoryPoint>& points, double hold,
                 double dt) {
  require_dt(dt);
  if (points.empty()) throw std::invalid_argument("cannot hold an empty trajectory");
  if (!(hold >= 0.0)) throw std::invalid_argument("hold must be >= 0");
  const TrajectoryPoint last = points.back();
  const Vec3 ee = forward_kinematics(model, last.q).position;
  for (std::size_t k = 1;; ++k) {
    const double offset = static_cast<double>(k) * dt;
    if (offset > hold + kTimeEpsilon) break;
    points.push_back({last.t + offset, last.q, ee});
  }
}

Path::Path(std::vector<Segment> segments) : segments_(std::move(segments)) {
  for (const auto& s : segments_) duration_ += s.duration;
}

JointVector Path::at(double t) const {
  if (segments_.empty()) throw std::logic_error("empty path");
  double t0 = 0.0;
  for (const auto& s : segments_) {
    if (t < t0 + s.duration) return s.at(t - t0);
    t0 += s.duration;
  }
  return segments_.back().q_end;
}

Path plan_path(const RobotModel& model, std::span<const JointVector> waypoints,
               double speed_scale) {
  if (waypoints.empty()) throw std::invalid_argument("path needs at least one waypoint");
  std::vector<Segment> segs;
  if (waypoints.size() == 1) {
    segs.push_back(plan_segment(model, waypoints[0], waypoints[0], speed_scale));
  }
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    segs.push_back(plan_segment(model, waypoints[i - 1], waypoints[i], speed_scale));
  }
  return Path(std::move(segs));
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryPoint> points) {
  out << "t,q1,q2,q3,q4,q5,x,y,z\n";
  for (const auto& p : points) {
    out << fixed6(p.t);
    for (double v : p.q.q) out << ',' << fixed6(v);
    out << ',' << fixed6(p.ee.x()) << ',' << fixed6(p.ee.y()) << ',' << fixed6(p.ee.z()) << '\n';
  }
}

}  // namespace feedsim
