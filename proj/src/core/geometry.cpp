#include "core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace placement {

namespace {

constexpr double kCoplanarTol = 1e-6;  // m, face merging tolerance

bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  if (a.y() != b.y()) return a.y() < b.y();
  return a.z() < b.z();
}

}  // namespace

Pose Pose::from_euler(const Vec3& p, double ex, double ey, double ez) {
  Quat q = Eigen::AngleAxisd(ez, Vec3::UnitZ()) * Eigen::AngleAxisd(ey, Vec3::UnitY()) *
           Eigen::AngleAxisd(ex, Vec3::UnitX());
  return Pose(p, q);
}

Pose Pose::rot_z(double theta, const Vec3& p) {
  return Pose(p, Quat(Eigen::AngleAxisd(theta, Vec3::UnitZ())));
}

Vec3 Pose::euler() const {
  const Eigen::Matrix3d r = orientation.toRotationMatrix();
  const double sy = -r(2, 0);
  double ex, ey, ez;
  if (std::abs(sy) < 1.0 - 1e-12) {
    ey = std::asin(std::clamp(sy, -1.0, 1.0));
    ex = std::atan2(r(2, 1), r(2, 2));
    ez = std::atan2(r(1, 0), r(0, 0));
  } else {
    // Gimbal lock: e_x and e_z are coupled, fix e_z = 0.
    ey = sy > 0 ? M_PI / 2 : -M_PI / 2;
    ez = 0.0;
    ex = std::atan2(-r(0, 1), r(1, 1));
  }
  return Vec3(ex, ey, ez);
}

bool Pose::approx_equal(const Pose& other, double pos_tol, double ang_tol) const {
  return (position - other.position).norm() <= pos_tol &&
         orientation_angle(orientation, other.orientation) <= ang_tol;
}

double orientation_angle(const Quat& q1, const Quat& q2) {
  const double d = std::clamp(std::abs(q1.dot(q2)), 0.0, 1.0);
  return 2.0 * std::acos(d);
}

Vec3 rotation_vector(const Quat& q) {
  Eigen::AngleAxisd aa(q);
  double angle = aa.angle();
  if (angle > M_PI) angle -= 2.0 * M_PI;
  return angle * aa.axis();
}

double ObjectModel::bounding_radius() const {
  double r = 0.0;
  for (const auto& p : surface_points) r = std::max(r, p.norm());
  for (const auto& p : body_points) r = std::max(r, p.norm());
  return r;
}

void ObjectModel::validate() const {
  if (surface_points.empty())
    raise(ErrorCode::degenerate_input, "object has no surface points");
  if (body_points.empty())
    raise(ErrorCode::degenerate_input, "object has no body points");
  const Polyhedron hull = convex_hull(surface_points);
  for (const auto& f : hull.faces) {
    if (f.normal.dot(com) - f.offset > 1e-9)
      raise(ErrorCode::degenerate_input, "center of mass lies outside the convex hull");
  }
}

// ---------------------------------------------------------------------------
// Convex hull: incremental insertion over triangles, then coplanar merging.
// ---------------------------------------------------------------------------

namespace {

struct Tri {
  int a, b, c;
  Vec3 normal;    // unit, outward
  double offset;  // normal . v
  bool alive = true;
};

double tri_dist(const Tri& t, const Vec3& p) { return t.normal.dot(p) - t.offset; }

Tri make_tri(const std::vector<Vec3>& pts, int a, int b, int c, const Vec3& interior) {
  Tri t{a, b, c, Vec3::UnitZ(), 0.0, true};
  Vec3 n = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
  const double len = n.norm();
  if (len > 0) n /= len;
  if (n.dot(interior - pts[a]) > 0) {
    std::swap(t.b, t.c);
    n = -n;
  }
  t.normal = n;
  t.offset = n.dot(pts[a]);
  return t;
}

// Chains directed boundary edges into a single loop.
std::vector<int> chain_loop(const std::map<int, int>& next, int start) {
  std::vector<int> loop;
  int v = start;
  do {
    loop.push_back(v);
    auto it = next.find(v);
    if (it == next.end())
      raise(ErrorCode::degenerate_input, "convex hull produced a broken face loop");
    v = it->second;
  } while (v != start && loop.size() <= next.size() + 1);
  if (v != start)
    raise(ErrorCode::degenerate_input, "convex hull produced a non-closed face loop");
  return loop;
}

}  // namespace

Polyhedron convex_hull(const std::vector<Vec3>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 4) raise(ErrorCode::degenerate_input, "convex hull needs at least 4 points");

  Vec3 lo = points[0], hi = points[0];
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double scale = std::max((hi - lo).norm(), 1e-12);
  const double degen_tol = std::max(1e-9 * scale, 1e-7);
  const double vis_tol = std::max(1e-12, 1e-10 * scale);

  // Initial simplex: spread pair, then farthest from line, then from plane.
  int i0 = 0, i1 = 0;
  double best = -1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = (points[i] - points[j]).squaredNorm();
      if (d > best) {
        best = d;
        i0 = i;
        i1 = j;
      }
    }
  if (best <= degen_tol * degen_tol)
    raise(ErrorCode::degenerate_input, "all points coincide");

  const Vec3 dir = (points[i1] - points[i0]).normalized();
  int i2 = -1;
  best = degen_tol;
  for (int i = 0; i < n; ++i) {
    const Vec3 v = points[i] - points[i0];
    const double d = (v - v.dot(dir) * dir).norm();
    if (d > best) {
      best = d;
      i2 = i;
    }
  }
  if (i2 < 0) raise(ErrorCode::degenerate_input, "points are collinear");

  const Vec3 pn = (points[i1] - points[i0]).cross(points[i2] - points[i0]).normalized();
  int i3 = -1;
  best = degen_tol;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(pn.dot(points[i] - points[i0]));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (i3 < 0) raise(ErrorCode::degenerate_input, "points are coplanar");

  const Vec3 interior =
      (points[i0] + points[i1] + points[i2] + points[i3]) / 4.0;

  std::vector<Tri> tris;
  tris.push_back(make_tri(points, i0, i1, i2, interior));
  tris.push_back(make_tri(points, i0, i1, i3, interior));
  tris.push_back(make_tri(points, i0, i2, i3, interior));
  tris.push_back(make_tri(points, i1, i2, i3, interior));

  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<int> visible;
    for (int t = 0; t < static_cast<int>(tris.size()); ++t)
      if (tris[t].alive && tri_dist(tris[t], points[p]) > vis_tol) visible.push_back(t);
    if (visible.empty()) continue;

    // Horizon = directed edges of visible triangles whose twin edge is not
    // part of any visible triangle.
    std::set<std::pair<int, int>> vis_edges;
    for (int t : visible) {
      const Tri& tr = tris[t];
      vis_edges.insert({tr.a, tr.b});
      vis_edges.insert({tr.b, tr.c});
      vis_edges.insert({tr.c, tr.a});
    }
    std::vector<std::pair<int, int>> horizon;
    for (const auto& e : vis_edges)
      if (!vis_edges.count({e.second, e.first})) horizon.push_back(e);

    for (int t : visible) tris[t].alive = false;
    for (const auto& e : horizon)
      tris.push_back(make_tri(points, e.first, e.second, p, interior));
  }

  std::vector<Tri> live;
  for (const auto& t : tris)
    if (t.alive) live.push_back(t);

  // Group mutually coplanar adjacent triangles (all vertices within the
  // merge tolerance of the seed plane) and trace each group's boundary loop.
  const int m = static_cast<int>(live.size());
  std::map<std::pair<int, int>, int> owner;  // directed edge -> triangle
  for (int t = 0; t < m; ++t) {
    owner[{live[t].a, live[t].b}] = t;
    owner[{live[t].b, live[t].c}] = t;
    owner[{live[t].c, live[t].a}] = t;
  }
  auto neighbors = [&](int t) {
    std::vector<int> out;
    const Tri& tr = live[t];
    const std::pair<int, int> edges[3] = {{tr.b, tr.a}, {tr.c, tr.b}, {tr.a, tr.c}};
    for (const auto& e : edges) {
      auto it = owner.find(e);
      if (it != owner.end()) out.push_back(it->second);
    }
    return out;
  };

  std::vector<int> group(m, -1);
  int ngroups = 0;
  for (int seed = 0; seed < m; ++seed) {
    if (group[seed] >= 0) continue;
    const int g = ngroups++;
    const Vec3 sn = live[seed].normal;
    const double so = live[seed].offset;
    std::vector<int> stack{seed};
    group[seed] = g;
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      for (int u : neighbors(t)) {
        if (group[u] >= 0 || live[u].normal.dot(sn) < 0.5) continue;
        const Tri& tr = live[u];
        const bool coplanar = std::abs(sn.dot(points[tr.a]) - so) <= kCoplanarTol &&
                              std::abs(sn.dot(points[tr.b]) - so) <= kCoplanarTol &&
                              std::abs(sn.dot(points[tr.c]) - so) <= kCoplanarTol;
        if (coplanar) {
          group[u] = g;
          stack.push_back(u);
        }
      }
    }
  }

  struct RawFace {
    std::vector<int> loop;  // original point indices
    Vec3 normal;
    double offset;
  };
  std::vector<RawFace> raw;
  for (int g = 0; g < ngroups; ++g) {
    std::set<std::pair<int, int>> edges;
    for (int t = 0; t < m; ++t) {
      if (group[t] != g) continue;
      const Tri& tr = live[t];
      edges.insert({tr.a, tr.b});
      edges.insert({tr.b, tr.c});
      edges.insert({tr.c, tr.a});
    }
    std::map<int, int> next;
    for (const auto& e : edges)
      if (!edges.count({e.second, e.first})) next[e.first] = e.second;

    int start = next.begin()->first;
    for (const auto& kv : next)
      if (lex_less(points[kv.first], points[start])) start = kv.first;

    RawFace f;
    f.loop = chain_loop(next, start);

    // Newell normal; triangles were wound outward so the loop is CCW from
    // outside already, but re-orient defensively.
    Vec3 nn = Vec3::Zero();
    for (size_t i = 0; i < f.loop.size(); ++i) {
      const Vec3& a = points[f.loop[i]];
      const Vec3& b = points[f.loop[(i + 1) % f.loop.size()]];
      nn += a.cross(b);
    }
    nn.normalize();
    Vec3 centroid = Vec3::Zero();
    for (int v : f.loop) centroid += points[v];
    centroid /= static_cast<double>(f.loop.size());
    if (nn.dot(centroid - interior) < 0) {
      std::reverse(f.loop.begin(), f.loop.end());
      std::rotate(f.loop.begin(), std::prev(f.loop.end()), f.loop.end());
      nn = -nn;
    }
    f.normal = nn;
    f.offset = 0.0;
    for (int v : f.loop) f.offset += nn.dot(points[v]);
    f.offset /= static_cast<double>(f.loop.size());
    raw.push_back(std::move(f));
  }

  std::sort(raw.begin(), raw.end(), [&](const RawFace& a, const RawFace& b) {
    if (lex_less(points[a.loop[0]], points[b.loop[0]])) return true;
    if (lex_less(points[b.loop[0]], points[a.loop[0]])) return false;
    return std::lexicographical_compare(a.normal.data(), a.normal.data() + 3,
                                        b.normal.data(), b.normal.data() + 3);
  });

  Polyhedron poly;
  std::map<int, int> remap;
  for (const auto& f : raw) {
    HullFace hf;
    hf.normal = f.normal;
    hf.offset = f.offset;
    for (int v : f.loop) {
      auto it = remap.find(v);
      if (it == remap.end()) {
        it = remap.emplace(v, static_cast<int>(poly.vertices.size())).first;
        poly.vertices.push_back(points[v]);
      }
      hf.loop.push_back(it->second);
    }
    poly.faces.push_back(std::move(hf));
  }
  return poly;
}

double polygon_inset_distance(const Vec3& p, const std::vector<Vec3>& loop, const Vec3& normal) {
  double dist = std::numeric_limits<double>::infinity();
  const size_t k = loop.size();
  for (size_t i = 0; i < k; ++i) {
    const Vec3& a = loop[i];
    const Vec3& b = loop[(i + 1) % k];
    Vec3 inward = normal.cross(b - a);
    const double len = inward.norm();
    if (len < 1e-15) continue;
    inward /= len;
    dist = std::min(dist, inward.dot(p - a));
  }
  return dist;
}

std::vector<PlacementFace> extract_placement_faces(const ObjectModel& obj,
                                                   const PlacementFaceParams& params) {
  const Polyhedron hull = convex_hull(obj.surface_points);
  std::vector<PlacementFace> faces;
  for (const auto& hf : hull.faces) {
    std::vector<Vec3> loop;
    loop.reserve(hf.loop.size());
    for (int v : hf.loop) loop.push_back(hull.vertices[v]);

    const Vec3 proj = obj.com - (hf.normal.dot(obj.com) - hf.offset) * hf.normal;
    if (polygon_inset_distance(proj, loop, hf.normal) < params.stability_margin) continue;

    PlacementFace face;
    face.id = static_cast<int>(faces.size());
    face.normal = hf.normal;

    // Reference vertex: lexicographically smallest; rotate loop to start there.
    size_t ref = 0;
    for (size_t i = 1; i < loop.size(); ++i)
      if (lex_less(loop[i], loop[ref])) ref = i;
    std::rotate(loop.begin(), loop.begin() + ref, loop.end());
    face.vertices = loop;

    // Contact frame at the reference vertex: z opposite the face normal,
    // x toward the next loop vertex.
    const Vec3 zf = -hf.normal;
    Vec3 xf = loop[1] - loop[0];
    xf -= xf.dot(zf) * zf;
    xf.normalize();
    const Vec3 yf = zf.cross(xf);
    Eigen::Matrix3d rf;
    rf.col(0) = xf;
    rf.col(1) = yf;
    rf.col(2) = zf;
    const Pose face_in_object(loop[0], Quat(rf));
    face.ref_transform = face_in_object.inverse();
    faces.push_back(std::move(face));
  }
  if (faces.empty())
    raise(ErrorCode::no_stable_face, "no hull face supports a stable placement");
  return faces;
}

Pose pose_from_parameters(double region_z, double x, double y, double theta,
                          const PlacementFace& face) {
  return Pose::rot_z(theta, Vec3(x, y, region_z)) * face.ref_transform;
}

// error.hpp
const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::degenerate_input: return "degenerate_input";
    case ErrorCode::no_stable_face: return "no_stable_face";
    case ErrorCode::volume_outside_grid: return "volume_outside_grid";
    case ErrorCode::joint_limit: return "joint_limit";
    case ErrorCode::leaf_node: return "leaf_node";
    case ErrorCode::exhausted: return "exhausted";
    case ErrorCode::invalid_goal: return "invalid_goal";
    case ErrorCode::unknown_goal: return "unknown_goal";
    case ErrorCode::precondition_failed: return "precondition_failed";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace placement
