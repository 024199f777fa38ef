#include "core/demo_assets.hpp"

namespace placement {

ObjectModel make_box_object(double sx, double sy, double sz, const std::string& name) {
  ObjectModel obj;
  obj.name = name;
  const double hx = sx / 2, hy = sy / 2, hz = sz / 2;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i)
        obj.surface_points.emplace_back((i ? hx : -hx), (j ? hy : -hy), (k ? hz : -hz));
  static const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                                  {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  for (const auto& q : quads) {
    obj.triangles.emplace_back(q[0], q[1], q[2]);
    obj.triangles.emplace_back(q[0], q[2], q[3]);
  }
  obj.com = Vec3::Zero();
  obj.body_points = generate_body_points(obj.surface_points, obj.triangles,
                                         std::min({sx, sy, sz}) / 3.0);
  return obj;
}

ObjectModel make_lprism_object() {
  // L cross-section in xz, extruded along y, roughly centered on the origin.
  ObjectModel obj;
  obj.name = "lprism";
  const Vec3 shift(-0.06, -0.04, -0.05);
  const double outline[6][2] = {{0.0, 0.0},  {0.12, 0.0}, {0.12, 0.04},
                                {0.04, 0.04}, {0.04, 0.10}, {0.0, 0.10}};
  for (int side = 0; side < 2; ++side) {
    const double y = side ? 0.08 : 0.0;
    for (const auto& v : outline)
      obj.surface_points.push_back(Vec3(v[0], y, v[1]) + shift);
  }
  // End caps (concave polygon fan from the corner vertex) and side quads.
  static const int cap[4][3] = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}};
  for (const auto& t : cap) {
    obj.triangles.emplace_back(t[0], t[2], t[1]);           // y = 0 cap, outward -y
    obj.triangles.emplace_back(6 + t[0], 6 + t[1], 6 + t[2]);  // y = max cap
  }
  for (int e = 0; e < 6; ++e) {
    const int a = e, b = (e + 1) % 6;
    obj.triangles.emplace_back(a, b, 6 + b);
    obj.triangles.emplace_back(a, 6 + b, 6 + a);
  }
  // Centroid of the L cross-section, mid-extrusion.
  obj.com = Vec3(0.12 * 7.0 / 18.0, 0.04, 0.10 * 11.0 / 30.0) + shift;
  obj.body_points = generate_body_points(obj.surface_points, obj.triangles, 0.02);
  return obj;
}

namespace {

void ground_slab(VoxelGrid& grid) {
  grid.fill_box(grid.world_min(), Vec3(grid.world_max().x(), grid.world_max().y(),
                                       grid.origin().z() + 0.02));
}

}  // namespace

Scene make_table_scene() {
  Scene scene;
  scene.grid = VoxelGrid(Vec3::Zero(), 0.02, Eigen::Vector3i(50, 60, 25));
  ground_slab(scene.grid);
  scene.grid.fill_box(Vec3(0.30, 0.20, 0.0), Vec3(0.90, 1.00, 0.06));   // table
  scene.grid.fill_box(Vec3(0.40, 0.30, 0.06), Vec3(0.48, 0.40, 0.18));  // clutter
  scene.grid.fill_box(Vec3(0.70, 0.70, 0.06), Vec3(0.80, 0.84, 0.14));
  scene.volume.min = Vec3(0.32, 0.22, 0.05);
  scene.volume.max = Vec3(0.88, 0.98, 0.40);
  return scene;
}

Scene make_shelf_scene() {
  Scene scene;
  scene.grid = VoxelGrid(Vec3::Zero(), 0.02, Eigen::Vector3i(50, 60, 30));
  ground_slab(scene.grid);
  VoxelGrid& g = scene.grid;
  g.fill_box(Vec3(0.50, 0.20, 0.08), Vec3(0.90, 1.00, 0.12));  // shelf floor
  g.fill_box(Vec3(0.86, 0.20, 0.08), Vec3(0.90, 1.00, 0.48));  // back wall
  g.fill_box(Vec3(0.50, 0.20, 0.08), Vec3(0.90, 0.24, 0.48));  // side walls
  g.fill_box(Vec3(0.50, 0.96, 0.08), Vec3(0.90, 1.00, 0.48));
  g.fill_box(Vec3(0.50, 0.20, 0.44), Vec3(0.90, 1.00, 0.48));  // top
  g.fill_box(Vec3(0.50, 0.44, 0.08), Vec3(0.90, 0.48, 0.44));  // dividers
  g.fill_box(Vec3(0.50, 0.70, 0.08), Vec3(0.90, 0.74, 0.44));
  // Clutter: first compartment dense, second moderate, third light.
  g.fill_box(Vec3(0.56, 0.26, 0.12), Vec3(0.64, 0.34, 0.24));
  g.fill_box(Vec3(0.70, 0.34, 0.12), Vec3(0.78, 0.42, 0.20));
  g.fill_box(Vec3(0.62, 0.52, 0.12), Vec3(0.72, 0.60, 0.22));
  g.fill_box(Vec3(0.78, 0.88, 0.12), Vec3(0.84, 0.94, 0.18));
  scene.volume.min = Vec3(0.52, 0.245, 0.11);
  scene.volume.max = Vec3(0.86, 0.955, 0.42);
  return scene;
}

Scene make_two_region_scene() {
  Scene scene;
  scene.grid = VoxelGrid(Vec3::Zero(), 0.02, Eigen::Vector3i(50, 50, 20));
  ground_slab(scene.grid);
  VoxelGrid& g = scene.grid;
  g.fill_box(Vec3(0.30, 0.20, 0.02), Vec3(0.50, 0.80, 0.06));  // platform A
  g.fill_box(Vec3(0.60, 0.20, 0.02), Vec3(0.80, 0.80, 0.06));  // platform B
  // Pillar grid over platform B, spacing 3 cells: gaps too narrow for the
  // demo box, so nothing can rest there collision-free.
  for (int i = 31; i < 40; i += 3)
    for (int j = 11; j < 40; j += 3)
      for (int k = 3; k < 15; ++k) g.set_occupied(i, j, k, true);
  // Trim platform A by one column so both regions end up with equal area.
  scene.volume.min = Vec3(0.315, 0.20, 0.05);
  scene.volume.max = Vec3(0.80, 0.80, 0.35);
  return scene;
}

ArmModel make_demo_arm(const std::string& name, const Pose& base_pose) {
  ArmModel arm;
  arm.name = name;
  arm.base_pose = base_pose;
  const double big = 2.96, small = 2.09;
  const double lift[7] = {0.06, 0.07, 0.12, 0.13, 0.11, 0.10, 0.07};
  for (int i = 0; i < 7; ++i) {
    Joint j;
    j.type = JointType::revolute;
    j.axis = (i % 2 == 0) ? Vec3::UnitZ() : Vec3::UnitY();
    j.origin = Pose(Vec3(0, 0, lift[i]), Quat::Identity());
    j.lo = (i % 2 == 0) ? -big : -small;
    j.hi = (i % 2 == 0) ? big : small;
    arm.joints.push_back(j);
  }
  arm.ee_offset = Pose(Vec3(0, 0, 0.05), Quat::Identity());
  arm.balls = {
      {{Vec3(0, 0, 0.03), 0.05}},
      {{Vec3(0, 0, 0.035), 0.05}},
      {{Vec3(0, 0, 0.06), 0.05}},
      {{Vec3(0, 0, 0.065), 0.05}},
      {{Vec3(0, 0, 0.055), 0.045}},
      {{Vec3(0, 0, 0.05), 0.04}},
      {{Vec3(0, 0, 0.035), 0.04}},
      {{Vec3(0, 0, 0.02), 0.035}, {Vec3(0, 0, 0.05), 0.03}},
  };
  return arm;
}

Grasp make_demo_grasp(int arm_index) {
  Grasp g;
  g.arm = arm_index;
  // Top grasp: gripper 0.10 above the object origin, z pointing down.
  g.gripper_in_object = Pose(Vec3(0, 0, 0.10), Quat(Eigen::AngleAxisd(M_PI, Vec3::UnitX())));
  return g;
}

Eigen::VectorXd demo_start_config() {
  Eigen::VectorXd q(7);
  q << 0.0, 0.3, 0.0, 0.5, 0.0, 0.3, 0.0;
  return q;
}

ArmSet make_demo_arm_set() {
  ArmSet set;
  set.arms.push_back(make_demo_arm("left", Pose(Vec3(0.12, 0.40, 0.16), Quat::Identity())));
  set.arms.push_back(make_demo_arm("right", Pose(Vec3(0.12, 0.80, 0.16), Quat::Identity())));
  set.grasps.push_back(make_demo_grasp(0));
  set.grasps.push_back(make_demo_grasp(1));
  set.start_configs.push_back(demo_start_config());
  set.start_configs.push_back(demo_start_config());
  return set;
}

ArmSet make_single_arm_set() {
  ArmSet set;
  set.arms.push_back(make_demo_arm("arm", Pose(Vec3(0.10, 0.50, 0.14), Quat::Identity())));
  set.grasps.push_back(make_demo_grasp(0));
  set.start_configs.push_back(demo_start_config());
  return set;
}

PlannerConfig make_demo_config() {
  PlannerConfig config;
  config.seed = 0;
  config.time_limit = 30.0;
  return config;
}

void write_demo_assets(const std::string& dir) {
  const std::string d = dir.empty() ? "." : dir;
  save_scene(make_table_scene(), d + "/table.scene");
  save_scene(make_shelf_scene(), d + "/shelf.scene");
  save_scene(make_two_region_scene(), d + "/two_region.scene");
  save_object(make_box_object(0.08, 0.08, 0.08, "box"), d + "/box.obj");
  save_object(make_box_object(0.06, 0.06, 0.16, "elongated_box"), d + "/elongated_box.obj");
  save_object(make_lprism_object(), d + "/lprism.obj");
  save_arms(make_demo_arm_set(), d + "/dual_arm.arms");
  save_arms(make_single_arm_set(), d + "/single_arm.arms");
  save_config(make_demo_config(), d + "/default.cfg");
}

}  // namespace placement
