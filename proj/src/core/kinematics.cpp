#include "core/kinematics.hpp"

#include <cmath>

namespace placement {

void ArmModel::validate() const {
  if (joints.empty()) raise(ErrorCode::degenerate_input, "arm needs at least one joint");
  for (const auto& j : joints) {
    if (j.lo >= j.hi) raise(ErrorCode::degenerate_input, "joint limits must satisfy lo < hi");
    if (std::abs(j.axis.norm() - 1.0) > 1e-9)
      raise(ErrorCode::degenerate_input, "joint axes must be unit vectors");
  }
  if (!balls.empty() && balls.size() != joints.size() + 1)
    raise(ErrorCode::degenerate_input, "balls must list base link plus one entry per joint");
}

bool ArmModel::within_limits(const Eigen::VectorXd& q, double slack) const {
  if (q.size() != dof()) return false;
  for (int i = 0; i < dof(); ++i)
    if (q[i] < joints[i].lo - slack || q[i] > joints[i].hi + slack) return false;
  return true;
}

void ArmModel::require_within_limits(const Eigen::VectorXd& q) const {
  if (!within_limits(q))
    raise(ErrorCode::joint_limit, "configuration violates joint limits for arm " + name);
}

Eigen::VectorXd ArmModel::clamp_to_limits(const Eigen::VectorXd& q) const {
  Eigen::VectorXd out = q;
  for (int i = 0; i < dof(); ++i) out[i] = std::clamp(out[i], joints[i].lo, joints[i].hi);
  return out;
}

Eigen::VectorXd ArmModel::random_configuration(Rng& rng) const {
  Eigen::VectorXd q(dof());
  for (int i = 0; i < dof(); ++i) {
    std::uniform_real_distribution<double> dist(joints[i].lo, joints[i].hi);
    q[i] = dist(rng);
  }
  return q;
}

double ArmModel::reach_bound() const {
  double sum = ee_offset.position.norm();
  for (const auto& j : joints) sum += j.origin.position.norm();
  double ball_extent = 0.0;
  for (const auto& link : balls)
    for (const auto& b : link) ball_extent = std::max(ball_extent, b.center.norm() + b.radius);
  return sum + ball_extent;
}

std::vector<Pose> link_poses(const ArmModel& arm, const Eigen::VectorXd& q) {
  arm.require_within_limits(q);
  std::vector<Pose> poses;
  poses.reserve(arm.joints.size() + 2);
  Pose t = arm.base_pose;
  poses.push_back(t);
  for (int i = 0; i < arm.dof(); ++i) {
    const Joint& j = arm.joints[i];
    t = t * j.origin;
    if (j.type == JointType::revolute)
      t = t * Pose(Vec3::Zero(), Quat(Eigen::AngleAxisd(q[i], j.axis)));
    else
      t = t * Pose(q[i] * j.axis, Quat::Identity());
    poses.push_back(t);
  }
  poses.push_back(t * arm.ee_offset);
  return poses;
}

Pose forward_kinematics(const ArmModel& arm, const Eigen::VectorXd& q) {
  return link_poses(arm, q).back();
}

Eigen::Matrix<double, 6, Eigen::Dynamic> jacobian(const ArmModel& arm,
                                                  const Eigen::VectorXd& q) {
  arm.require_within_limits(q);
  Eigen::Matrix<double, 6, Eigen::Dynamic> jac(6, arm.dof());
  Pose t = arm.base_pose;
  std::vector<Pose> pre;  // frame in which each joint's motion is applied
  pre.reserve(arm.joints.size());
  for (int i = 0; i < arm.dof(); ++i) {
    const Joint& j = arm.joints[i];
    t = t * j.origin;
    pre.push_back(t);
    if (j.type == JointType::revolute)
      t = t * Pose(Vec3::Zero(), Quat(Eigen::AngleAxisd(q[i], j.axis)));
    else
      t = t * Pose(q[i] * j.axis, Quat::Identity());
  }
  const Vec3 p_ee = (t * arm.ee_offset).position;
  for (int i = 0; i < arm.dof(); ++i) {
    const Vec3 axis_w = pre[i].rotate(arm.joints[i].axis);
    if (arm.joints[i].type == JointType::revolute) {
      jac.col(i).head<3>() = axis_w.cross(p_ee - pre[i].position);
      jac.col(i).tail<3>() = axis_w;
    } else {
      jac.col(i).head<3>() = axis_w;
      jac.col(i).tail<3>().setZero();
    }
  }
  return jac;
}

Pose object_pose(const ArmModel& arm, const Grasp& grasp, const Eigen::VectorXd& q) {
  return forward_kinematics(arm, q) * grasp.gripper_in_object.inverse();
}

std::optional<Eigen::VectorXd> solve_ik(const ArmModel& arm, const Pose& target, int seeds,
                                        Rng& rng, const IkParams& params) {
  for (int attempt = 0; attempt < std::max(seeds, 1); ++attempt) {
    Eigen::VectorXd q = arm.random_configuration(rng);
    for (int it = 0; it < params.max_iterations; ++it) {
      const Pose fk = forward_kinematics(arm, q);
      Eigen::Matrix<double, 6, 1> err;
      err.head<3>() = target.position - fk.position;
      err.tail<3>() = rotation_vector(target.orientation * fk.orientation.conjugate());
      if (err.head<3>().norm() <= params.position_tol &&
          err.tail<3>().norm() <= params.rotation_tol)
        return q;

      const auto jac = jacobian(arm, q);
      Eigen::Matrix<double, 6, 6> jjt = jac * jac.transpose();
      jjt.diagonal().array() += params.damping * params.damping;
      Eigen::VectorXd dq = jac.transpose() * jjt.ldlt().solve(err);
      const double biggest = dq.cwiseAbs().maxCoeff();
      if (biggest > params.step_clamp) dq *= params.step_clamp / biggest;
      q = arm.clamp_to_limits(q + dq);
    }
  }
  return std::nullopt;
}

std::vector<WorldBall> collision_balls_at(const ArmModel& arm, const Eigen::VectorXd& q) {
  const std::vector<Pose> frames = link_poses(arm, q);
  std::vector<WorldBall> out;
  for (std::size_t link = 0; link < arm.balls.size(); ++link)
    for (const auto& b : arm.balls[link])
      out.push_back({frames[link] * b.center, b.radius});
  return out;
}

}  // namespace placement
