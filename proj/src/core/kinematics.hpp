#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/geometry.hpp"
#include "core/world.hpp"

namespace placement {

enum class JointType { revolute, prismatic };

struct Joint {
  JointType type = JointType::revolute;
  Vec3 axis = Vec3::UnitZ();     // in the joint frame
  Pose origin;                   // fixed transform from the previous link frame
  double lo = -M_PI, hi = M_PI;  // position limits
};

struct CollisionBall {
  Vec3 center = Vec3::Zero();  // link frame
  double radius = 0.05;
};

struct ArmModel {
  std::string name = "arm";
  Pose base_pose;
  std::vector<Joint> joints;
  Pose ee_offset;  // fixed transform after the last joint
  /// balls[0] attaches to the base link, balls[i] to the link after joint i.
  std::vector<std::vector<CollisionBall>> balls;

  int dof() const { return static_cast<int>(joints.size()); }
  void validate() const;
  bool within_limits(const Eigen::VectorXd& q, double slack = 1e-9) const;
  void require_within_limits(const Eigen::VectorXd& q) const;
  Eigen::VectorXd clamp_to_limits(const Eigen::VectorXd& q) const;
  Eigen::VectorXd random_configuration(Rng& rng) const;
  /// Conservative bound on the distance from any joint axis to the farthest
  /// moving point (used to pick motion-validation resolution).
  double reach_bound() const;
};

/// The transform from the object frame to the gripper frame is stored as the
/// gripper pose expressed in the object frame, so that
/// object_pose(q) = forward_kinematics(q) * gripper_in_object^-1.
struct Grasp {
  int arm = 0;
  Pose gripper_in_object;
};

struct Configuration {
  Eigen::VectorXd q;
  int arm = 0;
};

/// End-effector pose. Throws joint_limit when q violates the limits.
Pose forward_kinematics(const ArmModel& arm, const Eigen::VectorXd& q);

/// World pose of every link frame: [0] is the base link, [i] the frame after
/// joint i, plus a final entry for the end-effector frame.
std::vector<Pose> link_poses(const ArmModel& arm, const Eigen::VectorXd& q);

/// Geometric Jacobian at the end-effector point: linear velocity rows on top,
/// angular below.
Eigen::Matrix<double, 6, Eigen::Dynamic> jacobian(const ArmModel& arm, const Eigen::VectorXd& q);

Pose object_pose(const ArmModel& arm, const Grasp& grasp, const Eigen::VectorXd& q);

struct IkParams {
  double position_tol = 1e-4;  // m
  double rotation_tol = 1e-3;  // rad
  double damping = 1e-3;
  int max_iterations = 200;
  double step_clamp = 0.2;  // per joint, rad or m
};

/// Damped-least-squares inverse kinematics from up to `seeds` random starts.
/// Returns the first configuration whose FK matches the target within the
/// tolerances, or nullopt when every seed fails.
std::optional<Eigen::VectorXd> solve_ik(const ArmModel& arm, const Pose& target, int seeds,
                                        Rng& rng, const IkParams& params = {});

struct WorldBall {
  Vec3 center;
  double radius;
};

std::vector<WorldBall> collision_balls_at(const ArmModel& arm, const Eigen::VectorXd& q);

}  // namespace placement
