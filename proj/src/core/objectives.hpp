#pragma once

#include <functional>
#include <string>

#include "core/geometry.hpp"
#include "core/world.hpp"

namespace placement {

/// User-pluggable placement objective; always maximized.
struct Objective {
  std::string name = "constant";
  std::function<double(const Pose&)> fn = [](const Pose&) { return 0.0; };

  double operator()(const Pose& pose) const { return fn(pose); }
};

/// Mean axis-ray clearance over the object's body points at the given pose.
double clearance(const Pose& pose, const ObjectModel& obj, const DistanceField& field);

Objective objective_max_clearance(const ObjectModel* obj, const DistanceField* field);
Objective objective_min_clearance(const ObjectModel* obj, const DistanceField* field);

/// Objective selected by name; "max-clearance" and "min-clearance" are
/// built in. Throws parse_error on unknown names.
Objective make_objective(const std::string& name, const ObjectModel* obj,
                         const DistanceField* field);

/// Central differences of the objective in (x, y, e_z). The e_z perturbation
/// rotates about the world z-axis through the pose position.
Vec3 numeric_gradient(const Objective& obj, const Pose& pose, double trans_step,
                      double rot_step);

}  // namespace placement
