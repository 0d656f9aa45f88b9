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

#include "feedsim/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/LU>

namespace feedsim {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

bool JointVector::is_finite() const {
  return std::all_of(q.begin(), q.end(), [](double v) { return std::isfinite(v); });
}

double JointVector::max_abs_diff(const JointVector& other) const {
  double m = 0.0;
  for (std::size_t i = 0; i < kNumJoints; ++i) m = std::max(m, std::abs(q[i] - other.q[i]));
  return m;
}

void DHRow::validate() const {
  require_finite(alpha_prev, "alpha_prev");
  require_finite(a_prev, "a_prev");
  require_finite(d, "d");
  require_finite(theta_home, "theta_home");
  if (a_prev < 0.0) throw std::invalid_argument("a_prev must be >= 0");
  if (alpha_prev < -180.0 || alpha_prev > 180.0) {
    throw std::invalid_argument("alpha_prev must lie in [-180, 180]");
  }
}

double JointLimit::clamp(double angle) const { return std::clamp(angle, min, max); }

void RobotModel::validate() const {
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    dh_rows[i].validate();
    const auto& lim = joint_limits[i];
    const std::string joint = "joint " + std::to_string(i + 1);
    if (!std::isfinite(lim.min) || !std::isfinite(lim.max) || !(lim.min < lim.max)) {
      throw std::invalid_argument(joint + ": limit min must be < max");
    }
    if (!std::isfinite(max_joint_speed[i]) || !(max_joint_speed[i] > 0.0)) {
      throw std::invalid_argument(joint + ": max_joint_speed must be > 0");
    }
  }
}

bool RobotModel::within_limits(const JointVector& q) const {
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    if (!joint_limits[i].contains(q[i])) return false;
  }
  return true;
}

Vec3 RobotModel::shoulder_point() const {
  // Frame {1}'s origin does not depend on the base joint variable.
  return link_transform(dh_rows[0], 0.0).translation();
}

double RobotModel::reach() const {
  double r = 0.0;
  for (std::size_t i = 1; i < kNumJoints; ++i) r += dh_rows[i].a_prev + std::abs(dh_rows[i].d);
  return r;
}

RigidTransform RigidTransform::from_matrix(const Eigen::Matrix4d& m, double tol) {
  RigidTransform t(m);
  if (!t.is_rigid(tol)) throw std::invalid_argument("matrix is not a rigid transform");
  return t;
}

RigidTransform RigidTransform::operator*(const RigidTransform& rhs) const {
  Eigen::Matrix4d p = m_ * rhs.m_;
  p.row(3) << 0.0, 0.0, 0.0, 1.0;
  return RigidTransform(p);
}

double RigidTransform::orthonormality_error() const {
  const Eigen::Matrix3d r = rotation();
  return (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
}

double RigidTransform::rotation_determinant() const { return rotation().determinant(); }

bool RigidTransform::has_exact_bottom_row() const {
  return m_(3, 0) == 0.0 && m_(3, 1) == 0.0 && m_(3, 2) == 0.0 && m_(3, 3) == 1.0;
}

bool RigidTransform::is_rigid(double tol) const {
  return m_.allFinite() && has_exact_bottom_row() && orthonormality_error() <= tol &&
         std::abs(rotation_determinant() - 1.0) <= tol;
}

std::pair<double, double> sin_cos_deg(double degrees) {
  double r = std::fmod(degrees, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;
  // Reduce to a quadrant so that the multiples of 90 come out exact.
  const int quadrant = static_cast<int>(r / 90.0);
  const double rad = (r - 90.0 * quadrant) * kDegToRad;
  const double s = std::sin(rad);
  const double c = std::cos(rad);
  switch (quadrant) {
    case 0: return {s, c};
    case 1: return {c, -s};
    case 2: return {-s, -c};
    default: return {-c, s};
  }
}

RigidTransform link_transform(const DHRow& row, double theta_deg) {
  row.validate();
  require_finite(theta_deg, "theta");
  const auto [st, ct] = sin_cos_deg(theta_deg + row.theta_home);
  const auto [sa, ca] = sin_cos_deg(row.alpha_prev);

  Eigen::Matrix4d m;
  m << ct,      -st,      0.0, row.a_prev,
       st * ca, ct * ca, -sa,  -sa * row.d,
       st * sa, ct * sa,  ca,   ca * row.d,
       0.0,     0.0,      0.0,  1.0;
  // Rigid by construction: every column pair is built from unit sin/cos pairs.
  return RigidTransform(m);
}

ForwardKinematicsResult forward_kinematics(const RobotModel& model, const JointVector& q) {
  if (!q.is_finite()) throw std::invalid_argument("joint vector must be finite");
  RigidTransform pose;
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    pose = pose * link_transform(model.dh_rows[i], q[i]);
  }
  return {pose, pose.translation()};
}

Jacobian numerical_jacobian(const RobotModel& model, const JointVector& q, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("jacobian step must be > 0");
  Jacobian jac;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    JointVector plus = q;
    JointVector minus = q;
    plus[j] += h;
    minus[j] -= h;
    jac.col(static_cast<Eigen::Index>(j)) =
        (forward_kinematics(model, plus).position - forward_kinematics(model, minus).position) /
        (2.0 * h);
  }
  return jac;
}

std::vector<Vec3> workspace_sample(const RobotModel& model, std::size_t n_per_joint) {
  if (n_per_joint < 2) throw std::invalid_argument("workspace grid needs n_per_joint >= 2");
  std::size_t total = 1;
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    if (total > kMaxWorkspaceSamples / n_per_joint) {
      throw std::invalid_argument("workspace grid exceeds " + std::to_string(kMaxWorkspaceSamples) +
                                  " points");
    }
    total *= n_per_joint;
  }

  std::array<std::vector<double>, kNumJoints> axes;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const auto& lim = model.joint_limits[j];
    axes[j].resize(n_per_joint);
    for (std::size_t k = 0; k < n_per_joint; ++k) {
      axes[j][k] = k + 1 == n_per_joint
                       ? lim.max
                       : lim.min + (lim.max - lim.min) * static_cast<double>(k) /
                                       static_cast<double>(n_per_joint - 1);
    }
  }

  std::vector<Vec3> points;
  points.reserve(total);
  std::array<std::size_t, kNumJoints> idx{};
  for (std::size_t n = 0; n < total; ++n) {
    JointVector q;
    for (std::size_t j = 0; j < kNumJoints; ++j) q[j] = axes[j][idx[j]];
    points.push_back(forward_kinematics(model, q).position);
    // Odometer increment, last joint fastest.
    for (std::size_t j = kNumJoints; j-- > 0;) {
      if (++idx[j] < n_per_joint) break;
      idx[j] = 0;
    }
  }
  return points;
}

}  // namespace feedsim
