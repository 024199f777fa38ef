#pragma once

#include "core/io.hpp"

namespace placement {

// Generated desk-scale demo content: a low-clutter table, a three-compartment
// shelf with clutter, and a two-platform focusing scene, plus three objects
// and a dual 7-DoF arm rig.

ObjectModel make_box_object(double sx, double sy, double sz, const std::string& name = "box");
ObjectModel make_lprism_object();

Scene make_table_scene();
Scene make_shelf_scene();
/// Two equal-area platforms; the +x one is filled with a pillar grid so no
/// placement there is collision-free.
Scene make_two_region_scene();

ArmModel make_demo_arm(const std::string& name, const Pose& base_pose);
Grasp make_demo_grasp(int arm_index);
Eigen::VectorXd demo_start_config();

ArmSet make_demo_arm_set();        // dual arm, matches table/shelf scenes
ArmSet make_single_arm_set();      // one arm, matches the two-region scene

PlannerConfig make_demo_config();

/// Writes every demo asset into dir: table.scene, shelf.scene,
/// two_region.scene, box/elongated_box/lprism (.obj + .meta), dual_arm.arms,
/// single_arm.arms and default.cfg.
void write_demo_assets(const std::string& dir);

}  // namespace placement
