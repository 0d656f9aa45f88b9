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

// Denavit-Hartenberg kinematics for the five-joint spoon-feeding arm.
//
// Conventions used throughout the project:
//   * angles are degrees at every interface,
//   * lengths are inches,
//   * frame {0} is the base frame, z up along the base yaw axis, x toward the
//     user at zero yaw.
//
// Link transforms use the modified (Craig) convention: row i carries
// alpha_{i-1} and a_{i-1} of the previous link plus d_i and theta_i.

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace feedsim {

inline constexpr std::size_t kNumJoints = 5;

using Vec3 = Eigen::Vector3d;
using Jacobian = Eigen::Matrix<double, 3, static_cast<int>(kNumJoints)>;

// Joint angles in degrees, ordered base, shoulder, elbow, wrist pitch, spoon
// pitch. The gripper roll of the physical arm is fixed and not represented.
struct JointVector {
  std::array<double, kNumJoints> q{};

  double& operator[](std::size_t i) { return q[i]; }
  double operator[](std::size_t i) const { return q[i]; }
  bool operator==(const JointVector&) const = default;

  bool is_finite() const;
  // Largest absolute per-joint difference.
  double max_abs_diff(const JointVector& other) const;
};

struct DHRow {
  double alpha_prev = 0.0;  // degrees
  double a_prev = 0.0;      // inches
  double d = 0.0;           // inches
  double theta_home = 0.0;  // degrees, added to the joint variable

  // Throws std::invalid_argument when a_prev < 0, alpha_prev is outside
  // [-180, 180] or any field is non-finite.
  void validate() const;
};

struct JointLimit {
  double min = 0.0;
  double max = 0.0;

  bool contains(double angle) const { return angle >= min && angle <= max; }
  double clamp(double angle) const;
};

struct RobotModel {
  std::array<DHRow, kNumJoints> dh_rows{};
  std::array<JointLimit, kNumJoints> joint_limits{};
  std::array<double, kNumJoints> max_joint_speed{};  // degrees per second
  // Documentation mirror of the physical link lengths; never used in math.
  std::vector<std::pair<std::string, double>> link_lengths;

  void validate() const;
  bool within_limits(const JointVector& q) const;

  // Shoulder origin, the fixed point the distal chain swings around.
  Vec3 shoulder_point() const;
  // Upper bound on the distance between shoulder_point() and the end
  // effector: the sum of the distal link lengths and offsets.
  double reach() const;
};

// A 4x4 homogeneous transform. Construction through from_matrix() checks the
// rigid-body invariants; products of valid transforms are trusted.
class RigidTransform {
 public:
  RigidTransform() : m_(Eigen::Matrix4d::Identity()) {}

  static RigidTransform from_matrix(const Eigen::Matrix4d& m, double tol = 1e-9);

  const Eigen::Matrix4d& matrix() const { return m_; }
  Eigen::Matrix3d rotation() const { return m_.topLeftCorner<3, 3>(); }
  Vec3 translation() const { return m_.topRightCorner<3, 1>(); }

  RigidTransform operator*(const RigidTransform& rhs) const;

  // max |R^T R - I| over all entries.
  double orthonormality_error() const;
  double rotation_determinant() const;
  bool has_exact_bottom_row() const;
  bool is_rigid(double tol = 1e-9) const;

 private:
  friend RigidTransform link_transform(const DHRow& row, double theta_deg);

  explicit RigidTransform(const Eigen::Matrix4d& m) : m_(m) {}

  Eigen::Matrix4d m_;
};

struct ForwardKinematicsResult {
  RigidTransform pose;  // {0}_T_{5}
  Vec3 position;        // translation column of pose
};

// Sine and cosine of an angle given in degrees. Multiples of 90 degrees give
// exact results (0, +-1).
std::pair<double, double> sin_cos_deg(double degrees);

RigidTransform link_transform(const DHRow& row, double theta_deg);

// Limits are not enforced; callers can evaluate out-of-range vectors.
ForwardKinematicsResult forward_kinematics(const RobotModel& model, const JointVector& q);

inline constexpr double kDefaultJacobianStep = 1e-4;  // degrees

// 3x5 central-difference Jacobian of the end-effector position, inches per
// degree.
Jacobian numerical_jacobian(const RobotModel& model, const JointVector& q,
                            double h = kDefaultJacobianStep);

inline constexpr std::size_t kMaxWorkspaceSamples = 10'000'000;

// FK positions over a uniform n^5 grid spanning each joint's limits. Joint 1
// varies slowest.
std::vector<Vec3> workspace_sample(const RobotModel& model, std::size_t n_per_joint);

}  // namespace feedsim
