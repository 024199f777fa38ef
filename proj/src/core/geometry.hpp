#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <vector>

#include "core/error.hpp"

namespace placement {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

/// Rigid transform in 3-space. Composition follows the usual convention:
/// (a * b) maps a point first through b, then through a.
struct Pose {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();

  Pose() = default;
  Pose(const Vec3& p, const Quat& q) : position(p), orientation(q.normalized()) {}

  static Pose identity() { return Pose(); }
  /// Extrinsic x-y-z rotation angles about the world axes (R = Rz*Ry*Rx).
  static Pose from_euler(const Vec3& p, double ex, double ey, double ez);
  static Pose rot_z(double theta, const Vec3& p = Vec3::Zero());

  Pose operator*(const Pose& rhs) const {
    return Pose(position + orientation * rhs.position, orientation * rhs.orientation);
  }
  Vec3 operator*(const Vec3& point) const { return position + orientation * point; }

  Pose inverse() const {
    Quat qi = orientation.conjugate();
    return Pose(-(qi * position), qi);
  }
  Vec3 rotate(const Vec3& v) const { return orientation * v; }

  /// (e_x, e_y, e_z) about the world axes, each in (-pi, pi].
  Vec3 euler() const;
  double euler_z() const { return euler().z(); }

  bool approx_equal(const Pose& other, double pos_tol, double ang_tol) const;
};

/// Angle of the rotation carrying q1 onto q2.
double orientation_angle(const Quat& q1, const Quat& q2);

/// Rotation vector (axis * angle) form of a quaternion.
Vec3 rotation_vector(const Quat& q);

struct ObjectModel {
  std::vector<Vec3> surface_points;
  std::vector<Eigen::Vector3i> triangles;  // indices into surface_points
  Vec3 com = Vec3::Zero();
  std::vector<Vec3> body_points;  // finite approximation of the volume
  std::string name = "object";

  /// Radius of the smallest origin-centered ball containing all points.
  double bounding_radius() const;
  /// Throws on empty point sets or a center of mass outside the hull.
  void validate() const;
};

/// A polyhedron face given as a vertex loop (counter-clockwise when viewed
/// from outside) with its outward unit normal.
struct HullFace {
  std::vector<int> loop;
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;  // normal . v == offset for loop vertices
};

struct Polyhedron {
  std::vector<Vec3> vertices;
  std::vector<HullFace> faces;
};

/// 3D convex hull with coplanar adjacent triangles merged into polygonal
/// faces (coplanarity tolerance 1e-6 m). Throws degenerate_input for fewer
/// than 4 points or (near-)coplanar input.
Polyhedron convex_hull(const std::vector<Vec3>& points);

/// A convex-hull face that supports a stable horizontal placement.
struct PlacementFace {
  int id = -1;
  std::vector<Vec3> vertices;  // ordered loop, object frame; [0] is the reference vertex
  Vec3 normal = -Vec3::UnitZ();
  /// Object pose expressed in the face contact frame, i.e. the transform
  /// such that world_pose = T(Rz(theta), (x, y, z_r)) * ref_transform places
  /// the reference vertex at (x, y, z_r) with the face normal along -z.
  Pose ref_transform;
};

struct PlacementFaceParams {
  double stability_margin = 1e-4;  // m, inward margin for the COM projection
};

/// Extracts the hull faces whose center-of-mass projection falls inside the
/// face polygon by at least the stability margin. Throws no_stable_face when
/// no face qualifies.
std::vector<PlacementFace> extract_placement_faces(const ObjectModel& obj,
                                                   const PlacementFaceParams& params = {});

/// Pose of the object when the face's reference vertex sits at (x, y, region_z)
/// and the object is spun about the vertical axis through it by theta.
Pose pose_from_parameters(double region_z, double x, double y, double theta,
                          const PlacementFace& face);

/// Signed in-plane distance of point p to the polygon boundary: positive
/// inside, negative outside. loop must be counter-clockwise when viewed from
/// the normal side.
double polygon_inset_distance(const Vec3& p, const std::vector<Vec3>& loop, const Vec3& normal);

}  // namespace placement
