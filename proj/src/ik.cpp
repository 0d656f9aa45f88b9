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

#include "feedsim/ik.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace feedsim {

namespace {

struct Evaluation {
  Vec3 position;
  Eigen::VectorXd error;  // position error, then the pitch row if requested
  double objective = 0.0;
};

class DlsProblem {
 public:
  DlsProblem(const RobotModel& model, const IKRequest& req) : model_(model), req_(req) {}

  Eigen::Index rows() const { return req_.pitch_constraint ? 4 : 3; }

  Evaluation evaluate(const JointVector& q) const {
    Evaluation ev;
    ev.position = forward_kinematics(model_, q).position;
    ev.error.resize(rows());
    ev.error.head<3>() = req_.target - ev.position;
    if (req_.pitch_constraint) ev.error(3) = *req_.pitch_constraint - spoon_pitch(q);
    ev.objective = ev.error.norm();
    return ev;
  }

  Eigen::MatrixXd jacobian(const JointVector& q) const {
    Eigen::MatrixXd jac(rows(), static_cast<Eigen::Index>(kNumJoints));
    jac.topRows<3>() = numerical_jacobian(model_, q);
    if (req_.pitch_constraint) jac.row(3) << 0.0, 1.0, 1.0, 1.0, 0.0;
    return jac;
  }

  bool done(const Evaluation& ev, const IKOptions& opts) const {
    const double pos = ev.error.head<3>().norm();
    if (pos > req_.tol) return false;
    return !req_.pitch_constraint || std::abs(ev.error(3)) <= opts.pitch_tolerance;
  }

 private:
  const RobotModel& model_;
  const IKRequest& req_;
};

// Damped least-squares step. Joints resting on a limit whose step would push
// them further out are frozen and the step is re-solved without them;
// clamping such a step instead would stall the iteration at the boundary.
Eigen::VectorXd dls_step(const RobotModel& model, const JointVector& q, Eigen::MatrixXd jac,
                         const Eigen::VectorXd& error, double lambda) {
  const Eigen::Index m = jac.rows();
  const Eigen::MatrixXd damping = lambda * lambda * Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd step;
  for (std::size_t pass = 0; pass <= kNumJoints; ++pass) {
    step = jac.transpose() * (jac * jac.transpose() + damping).ldlt().solve(error);
    bool froze = false;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      const auto col = static_cast<Eigen::Index>(j);
      const auto& lim = model.joint_limits[j];
      const bool pushes_out = (q[j] <= lim.min && step(col) < 0.0) ||
                              (q[j] >= lim.max && step(col) > 0.0);
      if (pushes_out && !jac.col(col).isZero()) {
        jac.col(col).setZero();
        froze = true;
      }
    }
    if (!froze) break;
  }
  return step;
}

JointVector apply_step(const RobotModel& model, const JointVector& q, Eigen::VectorXd step,
                       double max_norm) {
  const double n = step.norm();
  if (n > max_norm) step *= max_norm / n;
  JointVector out = q;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    out[j] = model.joint_limits[j].clamp(q[j] + step(static_cast<Eigen::Index>(j)));
  }
  return out;
}

void finish(const RobotModel& model, const IKRequest& req, const IKOptions& opts,
            IKResult& res) {
  res.achieved = forward_kinematics(model, res.q).position;
  res.residual = (res.achieved - req.target).norm();
  if (req.pitch_constraint) res.pitch_error = spoon_pitch(res.q) - *req.pitch_constraint;
  res.converged = res.reachable && res.residual <= req.tol &&
                  (!res.pitch_error || std::abs(*res.pitch_error) <= opts.pitch_tolerance);
}

}  // namespace

double spoon_pitch(const JointVector& q) { return q[1] + q[2] + q[3]; }

JointVector snap_to_limits(const RobotModel& model, const JointVector& q) {
  JointVector out = q;
  for (std::size_t j = 0; j < kNumJoints; ++j) out[j] = model.joint_limits[j].clamp(q[j]);
  return out;
}

IKResult solve_ik(const RobotModel& model, const IKRequest& req, const IKOptions& opts) {
  if (!req.target.allFinite()) throw std::invalid_argument("IK target must be finite");
  if (!req.seed.is_finite() || !model.within_limits(req.seed)) {
    throw std::invalid_argument("IK seed must be finite and within joint limits");
  }
  if (!(req.tol > 0.0)) throw std::invalid_argument("IK tol must be > 0");
  if (req.max_iter < 1) throw std::invalid_argument("IK max_iter must be >= 1");
  if (req.pitch_constraint && !std::isfinite(*req.pitch_constraint)) {
    throw std::invalid_argument("pitch constraint must be finite");
  }

  IKResult res;
  res.q = req.seed;
  if ((req.target - model.shoulder_point()).norm() > model.reach()) {
    res.reachable = false;
    finish(model, req, opts, res);
    return res;
  }

  const DlsProblem problem(model, req);
  Evaluation current = problem.evaluate(res.q);
  res.objective_history.push_back(current.objective);
  double lambda = opts.initial_damping;

  while (!problem.done(current, opts) && res.iterations < req.max_iter) {
    ++res.iterations;
    const Eigen::MatrixXd jac = problem.jacobian(res.q);

    bool accepted = false;
    while (lambda <= opts.max_damping) {
      const Eigen::VectorXd step = dls_step(model, res.q, jac, current.error, lambda);
      const JointVector candidate = apply_step(model, res.q, step, opts.max_step_norm);
      Evaluation next = problem.evaluate(candidate);
      if (next.objective < current.objective) {
        res.q = candidate;
        current = std::move(next);
        res.objective_history.push_back(current.objective);
        lambda = std::max(lambda * 0.5, opts.min_damping);
        accepted = true;
        break;
      }
      lambda *= 2.0;
    }
    if (!accepted) break;  // no descent left at any damping: stalled
  }

  finish(model, req, opts, res);
  return res;
}

}  // namespace feedsim
