#include "core/constraints.hpp"

#include <cmath>

namespace placement {

ConstraintParams ConstraintParams::resolved(double cell_size) const {
  ConstraintParams out = *this;
  auto fix = [&](double& v) {
    if (v <= 0.0) v = cell_size;
  };
  fix(out.eps_xi);
  fix(out.eps_r);
  fix(out.eps_theta);
  fix(out.eps_cf);
  fix(out.eps_q);
  if (out.stability_tol <= 0.0) out.stability_tol = cell_size;
  if (out.contact_offset == 0.0) out.contact_offset = -cell_size / 2.0;
  return out;
}

double smooth_hinge(double d, double eps) {
  if (d < 0.0) return -d + eps / 2.0;
  if (d <= eps) return (d - eps) * (d - eps) / (2.0 * eps);
  return 0.0;
}

bool is_stable(const Pose& pose, const PlacementFace& face,
               const std::vector<RegionPtr>& regions, double tol) {
  for (const auto& v : face.vertices) {
    const Vec3 w = pose * v;
    bool supported = false;
    for (const auto& r : regions) {
      if (std::abs(w.z() - r->z) > tol) continue;
      if (r->xy_distance(w.x(), w.y()) <= tol) {
        supported = true;
        break;
      }
    }
    if (!supported) return false;
  }
  return true;
}

bool is_object_collision_free(const Pose& pose, const ObjectModel& obj,
                              const DistanceField& field, double contact_offset) {
  for (const auto& p : obj.body_points)
    if (field.signed_distance_at(pose * p) <= contact_offset) return false;
  return true;
}

bool is_config_collision_free(const ArmModel& arm, const Eigen::VectorXd& q,
                              const DistanceField& field,
                              const std::optional<HeldObject>& held,
                              double contact_offset) {
  for (const auto& b : collision_balls_at(arm, q))
    if (field.signed_distance_at(b.center) <= b.radius) return false;
  if (held) {
    const Pose x = object_pose(arm, *held->grasp, q);
    if (!is_object_collision_free(x, *held->obj, field, contact_offset)) return false;
  }
  return true;
}

namespace {

// Orientation parameter of a pose relative to its face: the z-rotation angle
// theta with pose = Rz(theta) * T(xyz) * fT_o, normalized into [0, 2pi).
double pose_theta(const Pose& pose, const PlacementFace& face) {
  const Quat rz = pose.orientation * face.ref_transform.orientation.conjugate();
  const Eigen::Matrix3d m = rz.toRotationMatrix();
  double theta = std::atan2(m(1, 0), m(0, 0));
  if (theta < 0.0) theta += 2.0 * M_PI;
  return theta;
}

double interval_violation(double theta, double lo, double hi) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = -1; k <= 1; ++k) {
    const double t = theta + 2.0 * M_PI * k;
    best = std::min(best, std::max(lo - t, t - hi));
  }
  return best;
}

}  // namespace

ValidityReport error_terms(const Pose& pose, const std::optional<Eigen::VectorXd>& q,
                           const AfrNode& node, const ConstraintContext& ctx) {
  if (!node.sampleable())
    raise(ErrorCode::precondition_failed, "error terms need a node at depth >= 3");
  const ConstraintParams& cp = ctx.params;
  const PlacementFace& face = (*ctx.faces)[node.face];
  ValidityReport rep;

  // Objective error: zero once the objective beats xi_best by eps_xi.
  const double xi = (*ctx.objective)(pose);
  rep.e_xi = smooth_hinge(xi - ctx.xi_best, cp.eps_xi);

  // In-cell error: reference-vertex distance to the node's region plus the
  // orientation-interval violation.
  const Vec3 ref = pose * face.vertices[0];
  const double d_r = -node.region->surface_distance(ref) + cp.eps_r;
  const double d_theta =
      -interval_violation(pose_theta(pose, face), node.theta_lo, node.theta_hi) + cp.eps_theta;
  rep.e_region = smooth_hinge(d_r, cp.eps_r) + smooth_hinge(d_theta, cp.eps_theta);

  // Stability error: every face vertex must touch some region.
  rep.e_sigma = 0.0;
  for (const auto& v : face.vertices) {
    const Vec3 w = pose * v;
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& r : *ctx.all_regions) nearest = std::min(nearest, r->surface_distance(w));
    rep.e_sigma += smooth_hinge(-nearest + cp.eps_r, cp.eps_r);
  }

  // Collision error over the body points.
  rep.e_cf = 0.0;
  for (const auto& p : ctx.obj->body_points)
    rep.e_cf += smooth_hinge(ctx.field->signed_distance_at(pose * p), cp.eps_cf);

  if (q) {
    rep.arm_stage = ArmStage::evaluated;
    rep.arm_cost = 0.0;
    for (const auto& b : collision_balls_at(*ctx.arm, *q))
      rep.arm_cost +=
          smooth_hinge(ctx.field->signed_distance_at(b.center) - b.radius, cp.eps_q);
  }

  rep.objective_improves = rep.e_xi == 0.0;
  rep.stable = rep.e_sigma == 0.0;
  rep.object_collision_free = rep.e_cf == 0.0;
  rep.arm_collision_free = rep.arm_stage == ArmStage::evaluated && rep.arm_cost == 0.0;
  return rep;
}

double heuristic_value(const ValidityReport& report, const ConstraintParams& params) {
  const double t_xi = std::exp(-report.e_xi / params.scale_xi);
  const double t_region = std::exp(-report.e_region / params.scale_region);
  const double t_sigma = std::exp(-report.e_sigma / params.scale_sigma);
  const double t_cf = std::exp(-report.e_cf / params.scale_cf);
  if (report.arm_stage == ArmStage::not_attempted)
    return (t_xi + t_region + t_sigma + t_cf) / 4.0;
  const double t_arm =
      report.arm_stage == ArmStage::ik_failed ? 0.0 : std::exp(-report.arm_cost / params.scale_arm);
  return (t_xi + t_region + t_sigma + t_cf + t_arm) / 5.0;
}

}  // namespace placement
