#include "core/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace placement {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string pose_fields(const Pose& p) {
  const Vec3 e = p.euler();
  std::ostringstream os;
  os << fmt_double(p.position.x()) << ' ' << fmt_double(p.position.y()) << ' '
     << fmt_double(p.position.z()) << ' ' << fmt_double(e.x()) << ' ' << fmt_double(e.y())
     << ' ' << fmt_double(e.z());
  return os.str();
}

/// Tokenizing line reader with file/line diagnostics.
class LineReader {
 public:
  LineReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) raise(ErrorCode::io_error, "cannot open " + path);
  }

  // Next non-empty, non-comment line split into tokens; false at EOF.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      tokens.assign(std::istream_iterator<std::string>(ss), {});
      if (!tokens.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    raise(ErrorCode::parse_error, path_ + ":" + std::to_string(line_no_) + ": " + msg);
  }

  double num(const std::string& tok) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) fail("malformed number '" + tok + "'");
      return v;
    } catch (const std::exception&) {
      fail("malformed number '" + tok + "'");
    }
  }
  long integer(const std::string& tok) const {
    try {
      std::size_t used = 0;
      const long v = std::stol(tok, &used);
      if (used != tok.size()) fail("malformed integer '" + tok + "'");
      return v;
    } catch (const std::exception&) {
      fail("malformed integer '" + tok + "'");
    }
  }
  void expect_count(const std::vector<std::string>& t, std::size_t n) const {
    if (t.size() != n)
      fail("expected " + std::to_string(n) + " tokens, got " + std::to_string(t.size()));
  }
  Pose pose(const std::vector<std::string>& t, std::size_t offset) const {
    if (t.size() < offset + 6) fail("expected 6 pose fields (x y z ex ey ez)");
    return Pose::from_euler(Vec3(num(t[offset]), num(t[offset + 1]), num(t[offset + 2])),
                            num(t[offset + 3]), num(t[offset + 4]), num(t[offset + 5]));
  }

 private:
  std::string path_;
  std::ifstream in_;
  int line_no_ = 0;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::io_error, "cannot write " + path);
  return out;
}

void check_header(LineReader& r, const std::string& magic) {
  std::vector<std::string> t;
  if (!r.next(t)) r.fail("empty file");
  if (t.size() != 2 || t[0] != magic || t[1] != "1")
    r.fail("expected header '" + magic + " 1'");
}

std::string sidecar_path(const std::string& mesh_path) {
  const auto dot = mesh_path.find_last_of('.');
  const auto slash = mesh_path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return mesh_path + ".meta";
  return mesh_path.substr(0, dot) + ".meta";
}

}  // namespace

// ---------------------------------------------------------------------------
// Scene
// ---------------------------------------------------------------------------

Scene load_scene(const std::string& path) {
  LineReader r(path);
  check_header(r, "placement_scene");

  Vec3 origin = Vec3::Zero(), vmin = Vec3::Zero(), vmax = Vec3::Zero();
  double cell_size = 0.0;
  Eigen::Vector3i dims = Eigen::Vector3i::Zero();
  std::vector<std::uint8_t> occ;
  bool have_volume = false;

  std::vector<std::string> t;
  while (r.next(t)) {
    if (t[0] == "origin") {
      r.expect_count(t, 4);
      origin = Vec3(r.num(t[1]), r.num(t[2]), r.num(t[3]));
    } else if (t[0] == "cell_size") {
      r.expect_count(t, 2);
      cell_size = r.num(t[1]);
    } else if (t[0] == "dims") {
      r.expect_count(t, 4);
      dims = Eigen::Vector3i(static_cast<int>(r.integer(t[1])),
                             static_cast<int>(r.integer(t[2])),
                             static_cast<int>(r.integer(t[3])));
    } else if (t[0] == "volume") {
      r.expect_count(t, 7);
      vmin = Vec3(r.num(t[1]), r.num(t[2]), r.num(t[3]));
      vmax = Vec3(r.num(t[4]), r.num(t[5]), r.num(t[6]));
      have_volume = true;
    } else if (t[0] == "occupancy") {
      // Run-length tokens COUNTxVALUE in x-fastest cell order.
      for (std::size_t i = 1; i < t.size(); ++i) {
        const auto x = t[i].find('x');
        if (x == std::string::npos) r.fail("occupancy token must be COUNTxVALUE");
        const long count = r.integer(t[i].substr(0, x));
        const long value = r.integer(t[i].substr(x + 1));
        if (count < 0 || (value != 0 && value != 1))
          r.fail("occupancy token must be COUNTx{0|1}");
        occ.insert(occ.end(), count, static_cast<std::uint8_t>(value));
      }
    } else {
      r.fail("unknown scene field '" + t[0] + "'");
    }
  }
  if (cell_size <= 0.0) r.fail("missing or invalid cell_size");
  if ((dims.array() < 1).any()) r.fail("missing or invalid dims");
  if (!have_volume) r.fail("missing volume");

  Scene scene;
  scene.grid = VoxelGrid(origin, cell_size, dims);
  if (occ.size() != scene.grid.cell_count())
    r.fail("occupancy covers " + std::to_string(occ.size()) + " cells, grid has " +
           std::to_string(scene.grid.cell_count()));
  scene.grid.occupancy() = std::move(occ);
  scene.volume.min = vmin;
  scene.volume.max = vmax;
  if ((vmin.array() >= vmax.array()).any()) r.fail("volume min must be below max");
  return scene;
}

void save_scene(const Scene& scene, const std::string& path) {
  auto out = open_out(path);
  const VoxelGrid& g = scene.grid;
  out << "placement_scene 1\n";
  out << "origin " << fmt_double(g.origin().x()) << ' ' << fmt_double(g.origin().y()) << ' '
      << fmt_double(g.origin().z()) << "\n";
  out << "cell_size " << fmt_double(g.cell_size()) << "\n";
  out << "dims " << g.dims().x() << ' ' << g.dims().y() << ' ' << g.dims().z() << "\n";
  out << "volume " << fmt_double(scene.volume.min.x()) << ' '
      << fmt_double(scene.volume.min.y()) << ' ' << fmt_double(scene.volume.min.z()) << ' '
      << fmt_double(scene.volume.max.x()) << ' ' << fmt_double(scene.volume.max.y()) << ' '
      << fmt_double(scene.volume.max.z()) << "\n";

  const auto& occ = g.occupancy();
  std::size_t i = 0;
  int on_line = 0;
  while (i < occ.size()) {
    std::size_t j = i;
    while (j < occ.size() && occ[j] == occ[i]) ++j;
    if (on_line == 0) out << "occupancy";
    out << ' ' << (j - i) << 'x' << static_cast<int>(occ[i]);
    if (++on_line == 12) {
      out << "\n";
      on_line = 0;
    }
    i = j;
  }
  if (on_line) out << "\n";
}

// ---------------------------------------------------------------------------
// Object
// ---------------------------------------------------------------------------

std::vector<Vec3> generate_body_points(const std::vector<Vec3>& vertices,
                                       const std::vector<Eigen::Vector3i>& triangles,
                                       double resolution) {
  if (resolution <= 0.0) raise(ErrorCode::degenerate_input, "body resolution must be > 0");
  Vec3 lo = vertices.front(), hi = vertices.front();
  for (const auto& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  // Parity test along +z with a tiny xy offset to dodge edge hits.
  auto inside = [&](const Vec3& p0) {
    const Vec3 p = p0 + Vec3(1.1e-7, 2.3e-7, 0.0);
    int crossings = 0;
    for (const auto& tri : triangles) {
      const Vec3& a = vertices[tri.x()];
      const Vec3& b = vertices[tri.y()];
      const Vec3& c = vertices[tri.z()];
      const double d1x = b.x() - a.x(), d1y = b.y() - a.y();
      const double d2x = c.x() - a.x(), d2y = c.y() - a.y();
      const double det = d1x * d2y - d1y * d2x;
      if (std::abs(det) < 1e-18) continue;
      const double px = p.x() - a.x(), py = p.y() - a.y();
      const double u = (px * d2y - py * d2x) / det;
      const double v = (d1x * py - d1y * px) / det;
      if (u < 0 || v < 0 || u + v > 1) continue;
      const double z = a.z() + u * (b.z() - a.z()) + v * (c.z() - a.z());
      if (z > p.z()) ++crossings;
    }
    return crossings % 2 == 1;
  };

  std::vector<Vec3> pts;
  for (double z = lo.z() + resolution / 2; z < hi.z(); z += resolution)
    for (double y = lo.y() + resolution / 2; y < hi.y(); y += resolution)
      for (double x = lo.x() + resolution / 2; x < hi.x(); x += resolution) {
        const Vec3 p(x, y, z);
        if (inside(p)) pts.push_back(p);
      }
  if (pts.empty()) pts = vertices;  // degenerate thin meshes
  return pts;
}

ObjectModel load_object(const std::string& mesh_path) {
  ObjectModel obj;
  {
    LineReader r(mesh_path);
    std::vector<std::string> t;
    while (r.next(t)) {
      if (t[0] == "v") {
        r.expect_count(t, 4);
        obj.surface_points.emplace_back(r.num(t[1]), r.num(t[2]), r.num(t[3]));
      } else if (t[0] == "f") {
        r.expect_count(t, 4);
        const int n = static_cast<int>(obj.surface_points.size());
        Eigen::Vector3i tri(static_cast<int>(r.integer(t[1])) - 1,
                            static_cast<int>(r.integer(t[2])) - 1,
                            static_cast<int>(r.integer(t[3])) - 1);
        if ((tri.array() < 0).any() || (tri.array() >= n).any())
          r.fail("face index out of range");
        obj.triangles.push_back(tri);
      } else if (t[0] == "o" || t[0] == "g") {
        if (t.size() >= 2) obj.name = t[1];
      } else if (t[0] == "vn" || t[0] == "vt" || t[0] == "s" || t[0] == "mtllib" ||
                 t[0] == "usemtl") {
        // Tolerated OBJ fields we do not use.
      } else {
        r.fail("unsupported OBJ field '" + t[0] + "'");
      }
    }
    if (obj.surface_points.empty()) r.fail("mesh has no vertices");
  }

  LineReader r(sidecar_path(mesh_path));
  check_header(r, "placement_object_meta");
  double body_resolution = 0.0;
  std::vector<std::string> t;
  while (r.next(t)) {
    if (t[0] == "com") {
      r.expect_count(t, 4);
      obj.com = Vec3(r.num(t[1]), r.num(t[2]), r.num(t[3]));
    } else if (t[0] == "body_resolution") {
      r.expect_count(t, 2);
      body_resolution = r.num(t[1]);
    } else if (t[0] == "body_point") {
      r.expect_count(t, 4);
      obj.body_points.emplace_back(r.num(t[1]), r.num(t[2]), r.num(t[3]));
    } else if (t[0] == "name") {
      r.expect_count(t, 2);
      obj.name = t[1];
    } else {
      r.fail("unknown object meta field '" + t[0] + "'");
    }
  }
  if (obj.body_points.empty()) {
    if (body_resolution <= 0.0) r.fail("need body_point entries or body_resolution");
    obj.body_points = generate_body_points(obj.surface_points, obj.triangles, body_resolution);
  }
  obj.validate();
  return obj;
}

void save_object(const ObjectModel& obj, const std::string& mesh_path) {
  {
    auto out = open_out(mesh_path);
    out << "o " << obj.name << "\n";
    for (const auto& v : obj.surface_points)
      out << "v " << fmt_double(v.x()) << ' ' << fmt_double(v.y()) << ' '
          << fmt_double(v.z()) << "\n";
    for (const auto& f : obj.triangles)
      out << "f " << f.x() + 1 << ' ' << f.y() + 1 << ' ' << f.z() + 1 << "\n";
  }
  auto out = open_out(sidecar_path(mesh_path));
  out << "placement_object_meta 1\n";
  out << "name " << obj.name << "\n";
  out << "com " << fmt_double(obj.com.x()) << ' ' << fmt_double(obj.com.y()) << ' '
      << fmt_double(obj.com.z()) << "\n";
  for (const auto& p : obj.body_points)
    out << "body_point " << fmt_double(p.x()) << ' ' << fmt_double(p.y()) << ' '
        << fmt_double(p.z()) << "\n";
}

// ---------------------------------------------------------------------------
// Arms
// ---------------------------------------------------------------------------

ArmSet load_arms(const std::string& path) {
  LineReader r(path);
  check_header(r, "placement_arms");
  ArmSet set;
  ArmModel* cur = nullptr;
  std::vector<double> start;

  auto finish_arm = [&]() {
    if (!cur) return;
    cur->validate();
    if (set.grasps.size() != set.arms.size())
      r.fail("arm " + cur->name + " has no grasp line");
    Eigen::VectorXd q0 = Eigen::VectorXd::Zero(cur->dof());
    for (std::size_t i = 0; i < start.size() && i < static_cast<std::size_t>(cur->dof()); ++i)
      q0[i] = start[i];
    set.start_configs.push_back(q0);
    start.clear();
    cur = nullptr;
  };

  std::vector<std::string> t;
  while (r.next(t)) {
    if (t[0] == "arm") {
      finish_arm();
      r.expect_count(t, 2);
      set.arms.emplace_back();
      cur = &set.arms.back();
      cur->name = t[1];
      cur->balls.assign(1, {});
    } else if (t[0] == "end") {
      finish_arm();
    } else if (!cur) {
      r.fail("'" + t[0] + "' outside an arm block");
    } else if (t[0] == "base_pose") {
      cur->base_pose = r.pose(t, 1);
    } else if (t[0] == "joint") {
      // joint {revolute|prismatic} ax ay az  px py pz ex ey ez  lo hi
      r.expect_count(t, 13);
      Joint j;
      if (t[1] == "revolute")
        j.type = JointType::revolute;
      else if (t[1] == "prismatic")
        j.type = JointType::prismatic;
      else
        r.fail("joint type must be revolute or prismatic");
      j.axis = Vec3(r.num(t[2]), r.num(t[3]), r.num(t[4])).normalized();
      j.origin = r.pose(t, 5);
      j.lo = r.num(t[11]);
      j.hi = r.num(t[12]);
      cur->joints.push_back(j);
      cur->balls.emplace_back();
    } else if (t[0] == "ee_offset") {
      cur->ee_offset = r.pose(t, 1);
    } else if (t[0] == "ball") {
      // ball link cx cy cz radius
      r.expect_count(t, 6);
      const long link = r.integer(t[1]);
      if (link < 0 || link >= static_cast<long>(cur->balls.size()))
        r.fail("ball link index out of range");
      cur->balls[link].push_back(
          {Vec3(r.num(t[2]), r.num(t[3]), r.num(t[4])), r.num(t[5])});
    } else if (t[0] == "grasp") {
      Grasp g;
      g.arm = static_cast<int>(set.arms.size()) - 1;
      g.gripper_in_object = r.pose(t, 1);
      set.grasps.push_back(g);
    } else if (t[0] == "start") {
      start.clear();
      for (std::size_t i = 1; i < t.size(); ++i) start.push_back(r.num(t[i]));
    } else {
      r.fail("unknown arms field '" + t[0] + "'");
    }
  }
  finish_arm();
  if (set.arms.empty()) r.fail("no arms defined");
  return set;
}

void save_arms(const ArmSet& set, const std::string& path) {
  auto out = open_out(path);
  out << "placement_arms 1\n";
  for (std::size_t a = 0; a < set.arms.size(); ++a) {
    const ArmModel& arm = set.arms[a];
    out << "arm " << arm.name << "\n";
    out << "base_pose " << pose_fields(arm.base_pose) << "\n";
    for (std::size_t j = 0; j < arm.joints.size(); ++j) {
      const Joint& joint = arm.joints[j];
      out << "joint " << (joint.type == JointType::revolute ? "revolute" : "prismatic") << ' '
          << fmt_double(joint.axis.x()) << ' ' << fmt_double(joint.axis.y()) << ' '
          << fmt_double(joint.axis.z()) << ' ' << pose_fields(joint.origin) << ' '
          << fmt_double(joint.lo) << ' ' << fmt_double(joint.hi) << "\n";
    }
    out << "ee_offset " << pose_fields(arm.ee_offset) << "\n";
    for (std::size_t link = 0; link < arm.balls.size(); ++link)
      for (const auto& b : arm.balls[link])
        out << "ball " << link << ' ' << fmt_double(b.center.x()) << ' '
            << fmt_double(b.center.y()) << ' ' << fmt_double(b.center.z()) << ' '
            << fmt_double(b.radius) << "\n";
    out << "grasp " << pose_fields(set.grasps[a].gripper_in_object) << "\n";
    out << "start";
    for (int i = 0; i < set.start_configs[a].size(); ++i)
      out << ' ' << fmt_double(set.start_configs[a][i]);
    out << "\n";
    out << "end\n";
  }
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

namespace {

struct ConfigField {
  std::string key;
  std::function<std::string(const PlannerConfig&)> get;
  std::function<void(PlannerConfig&, const std::string&, const LineReader*)> set;
};

double parse_num(const std::string& v, const LineReader* r) {
  if (r) return r->num(v);
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    raise(ErrorCode::parse_error, "malformed number '" + v + "'");
  }
}

bool parse_bool(const std::string& v, const LineReader* r) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  if (r) r->fail("expected boolean, got '" + v + "'");
  raise(ErrorCode::parse_error, "expected boolean, got '" + v + "'");
}

const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = [] {
    std::vector<ConfigField> f;
    auto num = [&f](const std::string& key, auto getter, auto setter) {
      f.push_back({key,
                   [getter](const PlannerConfig& c) { return fmt_double(getter(c)); },
                   [setter](PlannerConfig& c, const std::string& v, const LineReader* r) {
                     setter(c, parse_num(v, r));
                   }});
    };
    auto boolean = [&f](const std::string& key, auto getter, auto setter) {
      f.push_back({key,
                   [getter](const PlannerConfig& c) {
                     return std::string(getter(c) ? "true" : "false");
                   },
                   [setter](PlannerConfig& c, const std::string& v, const LineReader* r) {
                     setter(c, parse_bool(v, r));
                   }});
    };
    num("seed", [](const PlannerConfig& c) { return double(c.seed); },
        [](PlannerConfig& c, double v) { c.seed = std::uint64_t(v); });
    num("time_limit", [](const PlannerConfig& c) { return c.time_limit; },
        [](PlannerConfig& c, double v) { c.time_limit = v; });
    num("max_iterations", [](const PlannerConfig& c) { return double(c.max_iterations); },
        [](PlannerConfig& c, double v) { c.max_iterations = int(v); });
    num("g_max", [](const PlannerConfig& c) { return double(c.g_max); },
        [](PlannerConfig& c, double v) { c.g_max = int(v); });
    num("m_max", [](const PlannerConfig& c) { return double(c.m_max); },
        [](PlannerConfig& c, double v) { c.m_max = int(v); });
    num("exploration_c", [](const PlannerConfig& c) { return c.exploration_c; },
        [](PlannerConfig& c, double v) { c.exploration_c = v; });
    num("hierarchy_l", [](const PlannerConfig& c) { return double(c.hierarchy.l); },
        [](PlannerConfig& c, double v) { c.hierarchy.l = int(v); });
    num("min_area", [](const PlannerConfig& c) { return c.hierarchy.min_area; },
        [](PlannerConfig& c, double v) { c.hierarchy.min_area = v; });
    num("min_theta", [](const PlannerConfig& c) { return c.hierarchy.min_theta; },
        [](PlannerConfig& c, double v) { c.hierarchy.min_theta = v; });
    num("eps_xi", [](const PlannerConfig& c) { return c.constraints.eps_xi; },
        [](PlannerConfig& c, double v) { c.constraints.eps_xi = v; });
    num("eps_r", [](const PlannerConfig& c) { return c.constraints.eps_r; },
        [](PlannerConfig& c, double v) { c.constraints.eps_r = v; });
    num("eps_theta", [](const PlannerConfig& c) { return c.constraints.eps_theta; },
        [](PlannerConfig& c, double v) { c.constraints.eps_theta = v; });
    num("eps_cf", [](const PlannerConfig& c) { return c.constraints.eps_cf; },
        [](PlannerConfig& c, double v) { c.constraints.eps_cf = v; });
    num("eps_q", [](const PlannerConfig& c) { return c.constraints.eps_q; },
        [](PlannerConfig& c, double v) { c.constraints.eps_q = v; });
    num("scale_xi", [](const PlannerConfig& c) { return c.constraints.scale_xi; },
        [](PlannerConfig& c, double v) { c.constraints.scale_xi = v; });
    num("scale_region", [](const PlannerConfig& c) { return c.constraints.scale_region; },
        [](PlannerConfig& c, double v) { c.constraints.scale_region = v; });
    num("scale_sigma", [](const PlannerConfig& c) { return c.constraints.scale_sigma; },
        [](PlannerConfig& c, double v) { c.constraints.scale_sigma = v; });
    num("scale_cf", [](const PlannerConfig& c) { return c.constraints.scale_cf; },
        [](PlannerConfig& c, double v) { c.constraints.scale_cf = v; });
    num("scale_arm", [](const PlannerConfig& c) { return c.constraints.scale_arm; },
        [](PlannerConfig& c, double v) { c.constraints.scale_arm = v; });
    num("stability_tol", [](const PlannerConfig& c) { return c.constraints.stability_tol; },
        [](PlannerConfig& c, double v) { c.constraints.stability_tol = v; });
    num("contact_offset", [](const PlannerConfig& c) { return c.constraints.contact_offset; },
        [](PlannerConfig& c, double v) { c.constraints.contact_offset = v; });
    num("revolute_step", [](const PlannerConfig& c) { return c.steer.revolute_step; },
        [](PlannerConfig& c, double v) { c.steer.revolute_step = v; });
    num("prismatic_step", [](const PlannerConfig& c) { return c.steer.prismatic_step; },
        [](PlannerConfig& c, double v) { c.steer.prismatic_step = v; });
    num("ik_seeds", [](const PlannerConfig& c) { return double(c.ik_seeds); },
        [](PlannerConfig& c, double v) { c.ik_seeds = int(v); });
    num("ik_position_tol", [](const PlannerConfig& c) { return c.ik.position_tol; },
        [](PlannerConfig& c, double v) { c.ik.position_tol = v; });
    num("ik_rotation_tol", [](const PlannerConfig& c) { return c.ik.rotation_tol; },
        [](PlannerConfig& c, double v) { c.ik.rotation_tol = v; });
    num("mu", [](const PlannerConfig& c) { return c.mu; },
        [](PlannerConfig& c, double v) { c.mu = v; });
    num("local_opt_max_steps",
        [](const PlannerConfig& c) { return double(c.local_opt_max_steps); },
        [](PlannerConfig& c, double v) { c.local_opt_max_steps = int(v); });
    num("gradient_tolerance", [](const PlannerConfig& c) { return c.gradient_tolerance; },
        [](PlannerConfig& c, double v) { c.gradient_tolerance = v; });
    num("trans_grad_step", [](const PlannerConfig& c) { return c.trans_grad_step; },
        [](PlannerConfig& c, double v) { c.trans_grad_step = v; });
    num("rot_grad_step", [](const PlannerConfig& c) { return c.rot_grad_step; },
        [](PlannerConfig& c, double v) { c.rot_grad_step = v; });
    num("stability_margin", [](const PlannerConfig& c) { return c.stability_margin; },
        [](PlannerConfig& c, double v) { c.stability_margin = v; });
    boolean("mcts_sampler", [](const PlannerConfig& c) { return c.mcts_sampler; },
            [](PlannerConfig& c, bool v) { c.mcts_sampler = v; });
    boolean("local_opt", [](const PlannerConfig& c) { return c.local_opt; },
            [](PlannerConfig& c, bool v) { c.local_opt = v; });
    f.push_back({"objective",
                 [](const PlannerConfig& c) { return c.objective; },
                 [](PlannerConfig& c, const std::string& v, const LineReader*) {
                   c.objective = v;
                 }});
    return f;
  }();
  return fields;
}

}  // namespace

PlannerConfig load_config(const std::string& path) {
  LineReader r(path);
  check_header(r, "placement_config");
  PlannerConfig config;
  std::vector<std::string> t;
  while (r.next(t)) {
    r.expect_count(t, 2);
    bool found = false;
    for (const auto& f : config_fields())
      if (f.key == t[0]) {
        f.set(config, t[1], &r);
        found = true;
        break;
      }
    if (!found) r.fail("unknown config key '" + t[0] + "'");
  }
  return config;
}

std::string serialize_config(const PlannerConfig& config) {
  std::ostringstream os;
  os << "placement_config 1\n";
  for (const auto& f : config_fields()) os << f.key << ' ' << f.get(config) << "\n";
  return os.str();
}

void save_config(const PlannerConfig& config, const std::string& path) {
  open_out(path) << serialize_config(config);
}

void apply_config_override(PlannerConfig& config, const std::string& key,
                           const std::string& value) {
  for (const auto& f : config_fields())
    if (f.key == key) {
      f.set(config, value, nullptr);
      return;
    }
  raise(ErrorCode::parse_error, "unknown config key '" + key + "'");
}

std::string config_hash(const PlannerConfig& config) {
  const std::string canon = serialize_config(config);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

// ---------------------------------------------------------------------------
// Solution paths
// ---------------------------------------------------------------------------

void save_solution(const Solution& solution, const ArmSet& arms, const std::string& path) {
  auto out = open_out(path);
  out << "placement_path 1\n";
  out << "arm " << solution.arm << ' ' << arms.arms[solution.arm].name << "\n";
  out << "xi " << fmt_double(solution.xi) << "\n";
  out << "pose " << pose_fields(solution.pose) << "\n";
  out << "waypoints " << solution.path.waypoints.size() << "\n";
  for (const auto& q : solution.path.waypoints) {
    out << "q";
    for (int i = 0; i < q.size(); ++i) out << ' ' << fmt_double(q[i]);
    out << "\n";
  }
}

SolutionFile load_solution(const std::string& path) {
  LineReader r(path);
  check_header(r, "placement_path");
  SolutionFile sol;
  std::vector<std::string> t;
  long expected = -1;
  while (r.next(t)) {
    if (t[0] == "arm") {
      r.expect_count(t, 3);
      sol.arm = static_cast<int>(r.integer(t[1]));
      sol.arm_name = t[2];
    } else if (t[0] == "xi") {
      r.expect_count(t, 2);
      sol.xi = r.num(t[1]);
    } else if (t[0] == "pose") {
      sol.pose = r.pose(t, 1);
    } else if (t[0] == "waypoints") {
      r.expect_count(t, 2);
      expected = r.integer(t[1]);
    } else if (t[0] == "q") {
      Eigen::VectorXd q(t.size() - 1);
      for (std::size_t i = 1; i < t.size(); ++i) q[i - 1] = r.num(t[i]);
      sol.waypoints.push_back(q);
    } else {
      r.fail("unknown path field '" + t[0] + "'");
    }
  }
  if (expected >= 0 && expected != static_cast<long>(sol.waypoints.size()))
    r.fail("waypoint count mismatch");
  if (sol.waypoints.empty()) r.fail("path has no waypoints");
  return sol;
}

// ---------------------------------------------------------------------------
// Mesh export
// ---------------------------------------------------------------------------

namespace {

struct ObjWriter {
  std::ofstream out;
  int base = 1;

  void box(const Vec3& lo, const Vec3& hi) {
    const double xs[2] = {lo.x(), hi.x()}, ys[2] = {lo.y(), hi.y()}, zs[2] = {lo.z(), hi.z()};
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i)
          out << "v " << xs[i] << ' ' << ys[j] << ' ' << zs[k] << "\n";
    static const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                                    {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
    for (const auto& q : quads)
      out << "f " << base + q[0] << ' ' << base + q[1] << ' ' << base + q[2] << ' '
          << base + q[3] << "\n";
    base += 8;
  }

  void mesh(const std::vector<Vec3>& vertices, const std::vector<Eigen::Vector3i>& tris,
            const Pose& pose) {
    for (const auto& v : vertices) {
      const Vec3 w = pose * v;
      out << "v " << w.x() << ' ' << w.y() << ' ' << w.z() << "\n";
    }
    for (const auto& t : tris)
      out << "f " << base + t.x() << ' ' << base + t.y() << ' ' << base + t.z() << "\n";
    base += static_cast<int>(vertices.size());
  }

  void sphere(const Vec3& c, double r) {
    // Octahedron placeholder for a ball; plenty for offline inspection.
    const Vec3 v[6] = {c + Vec3(r, 0, 0), c - Vec3(r, 0, 0), c + Vec3(0, r, 0),
                       c - Vec3(0, r, 0), c + Vec3(0, 0, r), c - Vec3(0, 0, r)};
    for (const auto& p : v) out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << "\n";
    static const int tris[8][3] = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                   {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
    for (const auto& t : tris)
      out << "f " << base + t[0] << ' ' << base + t[1] << ' ' << base + t[2] << "\n";
    base += 6;
  }
};

}  // namespace

void export_scene_obj(const Scene& scene, const ObjectModel* obj, const ArmSet* arms,
                      const SolutionFile* solution, const std::string& out_path) {
  ObjWriter w{open_out(out_path)};
  w.out << "o environment\n";
  const VoxelGrid& g = scene.grid;
  for (int k = 0; k < g.dims().z(); ++k)
    for (int j = 0; j < g.dims().y(); ++j)
      for (int i = 0; i < g.dims().x(); ++i)
        if (g.occupied(i, j, k)) {
          const Vec3 lo = g.origin() + g.cell_size() * Vec3(i, j, k);
          w.box(lo, lo + g.cell_size() * Vec3::Ones());
        }

  if (obj && solution) {
    w.out << "o object\n";
    w.mesh(obj->surface_points, obj->triangles, solution->pose);
  }
  if (arms && solution) {
    if (solution->arm < 0 || solution->arm >= static_cast<int>(arms->arms.size()))
      raise(ErrorCode::parse_error, "solution arm index does not match the arm set");
    w.out << "o arm_balls\n";
    const ArmModel& arm = arms->arms[solution->arm];
    for (const auto& q : solution->waypoints) {
      if (q.size() != arm.dof())
        raise(ErrorCode::parse_error, "waypoint dof does not match the arm");
      for (const auto& b : collision_balls_at(arm, q)) w.sphere(b.center, b.radius);
    }
  }
}

void save_sampler_stats(const SamplerStats& stats, const std::string& path) {
  auto out = open_out(path);
  out << "placement_sampler_stats 1\n";
  for (const auto& n : stats.nodes) {
    out << "node id=" << n.id << " parent=" << n.parent << " depth=" << n.depth
        << " arm=" << n.arm << " face=" << n.face << " region=" << n.region
        << " theta=" << fmt_double(n.theta_lo) << ':' << fmt_double(n.theta_hi)
        << " v=" << n.visits << " r=" << fmt_double(n.reward) << " leaf=" << (n.leaf ? 1 : 0)
        << "\n";
  }
}

}  // namespace placement
