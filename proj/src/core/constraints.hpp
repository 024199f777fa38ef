#pragma once

#include <optional>

#include "core/hierarchy.hpp"
#include "core/kinematics.hpp"
#include "core/objectives.hpp"

namespace placement {

struct ConstraintParams {
  // Hinge margins; any value <= 0 resolves to one cell size.
  double eps_xi = 0.0;
  double eps_r = 0.0;
  double eps_theta = 0.0;
  double eps_cf = 0.0;
  double eps_q = 0.0;
  // Per-term reward scales.
  double scale_xi = 1.0;
  double scale_region = 1.0;
  double scale_sigma = 1.0;
  double scale_cf = 1.0;
  double scale_arm = 1.0;
  // Exact-predicate tolerances.
  double stability_tol = 0.0;    // <= 0 resolves to one cell size
  double contact_offset = 0.0;   // <= 0 unresolved means -cell_size/2

  ConstraintParams resolved(double cell_size) const;
};

enum class ArmStage { not_attempted, ik_failed, evaluated };

/// Error terms plus their zero-test booleans. The booleans hold exactly when
/// the matching constraint is satisfied with the configured hinge margin.
struct ValidityReport {
  double e_xi = 0.0;
  double e_region = 0.0;
  double e_sigma = 0.0;
  double e_cf = 0.0;
  double arm_cost = 0.0;
  ArmStage arm_stage = ArmStage::not_attempted;

  bool stable = true;
  bool object_collision_free = true;
  bool objective_improves = true;
  bool arm_collision_free = false;

  bool fully_valid() const {
    return stable && object_collision_free && objective_improves && arm_collision_free;
  }
};

/// C1 hinge: -d + eps/2 below 0, quadratic tail on [0, eps], 0 beyond.
double smooth_hinge(double d, double eps);

/// True iff every face vertex, transformed by pose, lies within tol of some
/// region's surface (different vertices may rest on different regions).
bool is_stable(const Pose& pose, const PlacementFace& face,
               const std::vector<RegionPtr>& regions, double tol);

/// True iff every body point keeps signed distance above contact_offset.
bool is_object_collision_free(const Pose& pose, const ObjectModel& obj,
                              const DistanceField& field, double contact_offset);

struct HeldObject {
  const ObjectModel* obj = nullptr;
  const Grasp* grasp = nullptr;
};

/// True iff all collision balls clear the field and, when held, the grasped
/// object at object_pose(q) is collision-free too.
bool is_config_collision_free(const ArmModel& arm, const Eigen::VectorXd& q,
                              const DistanceField& field,
                              const std::optional<HeldObject>& held,
                              double contact_offset);

struct ConstraintContext {
  const std::vector<PlacementFace>* faces = nullptr;
  const std::vector<RegionPtr>* all_regions = nullptr;
  const DistanceField* field = nullptr;
  const ObjectModel* obj = nullptr;
  const Objective* objective = nullptr;
  double xi_best = -std::numeric_limits<double>::infinity();
  const ArmModel* arm = nullptr;
  const Grasp* grasp = nullptr;
  ConstraintParams params;  // must already be resolved
};

/// Evaluates the five error terms for a pose sampled against a hierarchy
/// cell (depth >= 3). q, when present, adds the arm collision cost.
ValidityReport error_terms(const Pose& pose, const std::optional<Eigen::VectorXd>& q,
                           const AfrNode& node, const ConstraintContext& ctx);

/// Partial-credit reward in [0, 1]: the mean of exp(-e/s) over the error
/// terms. Uses the four pose terms when IK was never attempted; a failed IK
/// contributes a worst-case arm term.
double heuristic_value(const ValidityReport& report, const ConstraintParams& params);

}  // namespace placement
