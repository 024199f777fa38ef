#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <unordered_set>
#include <vector>

#include "core/geometry.hpp"

namespace placement {

using Rng = std::mt19937_64;

struct TargetVolume {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Ones();

  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
};

class VoxelGrid {
 public:
  VoxelGrid() = default;
  VoxelGrid(const Vec3& origin, double cell_size, const Eigen::Vector3i& dims);

  const Vec3& origin() const { return origin_; }
  double cell_size() const { return cell_size_; }
  const Eigen::Vector3i& dims() const { return dims_; }
  std::size_t cell_count() const { return occupancy_.size(); }

  bool in_bounds(int i, int j, int k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < dims_.x() && j < dims_.y() && k < dims_.z();
  }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_.x()) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_.y()) * k);
  }

  bool occupied(int i, int j, int k) const { return occupancy_[index(i, j, k)] != 0; }
  void set_occupied(int i, int j, int k, bool value) {
    occupancy_[index(i, j, k)] = value ? 1 : 0;
  }
  const std::vector<std::uint8_t>& occupancy() const { return occupancy_; }
  std::vector<std::uint8_t>& occupancy() { return occupancy_; }

  /// Marks every cell whose center lies inside the closed box [lo, hi].
  void fill_box(const Vec3& lo, const Vec3& hi, bool value = true);

  Vec3 cell_center(int i, int j, int k) const {
    return origin_ + cell_size_ * Vec3(i + 0.5, j + 0.5, k + 0.5);
  }
  Eigen::Vector3i cell_of(const Vec3& p) const {
    return Eigen::Vector3i(static_cast<int>(std::floor((p.x() - origin_.x()) / cell_size_)),
                           static_cast<int>(std::floor((p.y() - origin_.y()) / cell_size_)),
                           static_cast<int>(std::floor((p.z() - origin_.z()) / cell_size_)));
  }
  Vec3 world_min() const { return origin_; }
  Vec3 world_max() const { return origin_ + cell_size_ * dims_.cast<double>(); }

 private:
  Vec3 origin_ = Vec3::Zero();
  double cell_size_ = 0.01;
  Eigen::Vector3i dims_ = Eigen::Vector3i::Ones();
  std::vector<std::uint8_t> occupancy_;
};

struct Scene {
  VoxelGrid grid;
  TargetVolume volume;
};

/// Per-cell signed Euclidean distance plus the axis-ray clearance used by the
/// clearance objectives. Point queries interpolate trilinearly between cell
/// centers; queries outside the grid are treated as free space.
class DistanceField {
 public:
  DistanceField() = default;

  const Vec3& origin() const { return origin_; }
  double cell_size() const { return cell_size_; }
  const Eigen::Vector3i& dims() const { return dims_; }

  double signed_distance_cell(int i, int j, int k) const { return sdist_[index(i, j, k)]; }
  double clearance_cell(int i, int j, int k) const { return clearance_[index(i, j, k)]; }

  double signed_distance_at(const Vec3& p) const { return sample(sdist_, p, true); }
  double clearance_at(const Vec3& p) const { return sample(clearance_, p, false); }

  friend DistanceField build_distance_field(const VoxelGrid& grid, const TargetVolume& volume);

 private:
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_.x()) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_.y()) * k);
  }
  double sample(const std::vector<double>& field, const Vec3& p, bool add_outside) const;

  Vec3 origin_ = Vec3::Zero();
  double cell_size_ = 0.01;
  Eigen::Vector3i dims_ = Eigen::Vector3i::Ones();
  std::vector<double> sdist_;
  std::vector<double> clearance_;
};

/// Signed distance is the Euclidean distance transform of the occupancy
/// (negative inside obstacles). Clearance is the minimum over the axis rays
/// {+x, -x, +y, -y, +z} of the distance to the nearest occupied cell, capped
/// at the target-volume boundary along each ray. Throws volume_outside_grid.
DistanceField build_distance_field(const VoxelGrid& grid, const TargetVolume& volume);

/// A contiguous constant-height patch of support cells inside the target
/// volume, addressed by (i, j) grid columns.
struct PlacementRegion {
  int id = -1;
  double z = 0.0;  // support height (top of the supporting layer)
  int layer = -1;  // supporting cell layer; -1 is the grid floor
  Vec3 grid_origin = Vec3::Zero();
  double cell_size = 0.01;
  std::vector<Eigen::Vector2i> cells;
  std::unordered_set<std::int64_t> cell_set;
  Eigen::AlignedBox2d aabb2d;

  static std::int64_t pack(int i, int j) {
    return (static_cast<std::int64_t>(i) << 32) | static_cast<std::uint32_t>(j);
  }
  bool contains_cell(int i, int j) const { return cell_set.count(pack(i, j)) != 0; }
  std::size_t cell_count() const { return cells.size(); }
  double area() const { return static_cast<double>(cells.size()) * cell_size * cell_size; }
  Eigen::Vector2d cell_min(const Eigen::Vector2i& c) const {
    return Eigen::Vector2d(grid_origin.x() + c.x() * cell_size,
                           grid_origin.y() + c.y() * cell_size);
  }
  /// Horizontal distance from (x, y) to the nearest cell footprint (0 inside).
  double xy_distance(double x, double y) const;
  /// 3D distance from p to the region surface patch.
  double surface_distance(const Vec3& p) const;
  void finalize();  // rebuilds cell_set and aabb2d from cells
};

using RegionPtr = std::shared_ptr<const PlacementRegion>;

/// Maximal 4-connected components of support cells (occupied or grid-floor
/// cells with a free cell above) inside the target volume, split by support
/// layer, excluding cells without clearance_height of free space above.
std::vector<RegionPtr> extract_regions(const VoxelGrid& grid, const TargetVolume& volume,
                                       double clearance_height);

/// Splits by the mean x/y cell-center positions into up to 4 subregions.
/// Quadrant order: (-x,-y), (-x,+y), (+x,-y), (+x,+y); empty quadrants are
/// dropped and connectivity is not re-enforced.
std::vector<RegionPtr> split_region(const PlacementRegion& region);

/// Uniform sample over the region footprint, at the region height.
Vec3 sample_point(const PlacementRegion& region, Rng& rng);

}  // namespace placement
