#include "core/objectives.hpp"

namespace placement {

double clearance(const Pose& pose, const ObjectModel& obj, const DistanceField& field) {
  if (obj.body_points.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : obj.body_points) sum += field.clearance_at(pose * p);
  return sum / static_cast<double>(obj.body_points.size());
}

Objective objective_max_clearance(const ObjectModel* obj, const DistanceField* field) {
  return {"max-clearance", [obj, field](const Pose& x) { return clearance(x, *obj, *field); }};
}

Objective objective_min_clearance(const ObjectModel* obj, const DistanceField* field) {
  return {"min-clearance", [obj, field](const Pose& x) { return -clearance(x, *obj, *field); }};
}

Objective make_objective(const std::string& name, const ObjectModel* obj,
                         const DistanceField* field) {
  if (name == "max-clearance") return objective_max_clearance(obj, field);
  if (name == "min-clearance") return objective_min_clearance(obj, field);
  raise(ErrorCode::parse_error, "unknown objective: " + name);
}

Vec3 numeric_gradient(const Objective& obj, const Pose& pose, double trans_step,
                      double rot_step) {
  auto shifted = [&](const Vec3& d) { return Pose(pose.position + d, pose.orientation); };
  auto spun = [&](double a) {
    return Pose(pose.position, Quat(Eigen::AngleAxisd(a, Vec3::UnitZ())) * pose.orientation);
  };
  Vec3 g;
  g.x() = (obj(shifted(Vec3(trans_step, 0, 0))) - obj(shifted(Vec3(-trans_step, 0, 0)))) /
          (2.0 * trans_step);
  g.y() = (obj(shifted(Vec3(0, trans_step, 0))) - obj(shifted(Vec3(0, -trans_step, 0)))) /
          (2.0 * trans_step);
  g.z() = (obj(spun(rot_step)) - obj(spun(-rot_step))) / (2.0 * rot_step);
  return g;
}

}  // namespace placement
