#include "core/world.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace placement {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

VoxelGrid::VoxelGrid(const Vec3& origin, double cell_size, const Eigen::Vector3i& dims)
    : origin_(origin), cell_size_(cell_size), dims_(dims) {
  if (cell_size <= 0.0 || (dims.array() < 1).any())
    raise(ErrorCode::degenerate_input, "voxel grid needs positive cell size and dims");
  occupancy_.assign(static_cast<std::size_t>(dims.x()) * dims.y() * dims.z(), 0);
}

void VoxelGrid::fill_box(const Vec3& lo, const Vec3& hi, bool value) {
  for (int k = 0; k < dims_.z(); ++k)
    for (int j = 0; j < dims_.y(); ++j)
      for (int i = 0; i < dims_.x(); ++i) {
        const Vec3 c = cell_center(i, j, k);
        if ((c.array() >= lo.array()).all() && (c.array() <= hi.array()).all())
          set_occupied(i, j, k, value);
      }
}

double DistanceField::sample(const std::vector<double>& field, const Vec3& p,
                             bool add_outside) const {
  // Clamp into the cell-center lattice; outside points optionally get the
  // clamp distance added (free-space assumption beyond the grid).
  const Vec3 lo = origin_ + 0.5 * cell_size_ * Vec3::Ones();
  const Vec3 hi = origin_ + cell_size_ * (dims_.cast<double>() - 0.5 * Vec3::Ones());
  const Vec3 q = p.cwiseMax(lo).cwiseMin(hi);
  const double outside = (p - q).norm();

  const Vec3 g = (q - lo) / cell_size_;
  int i0 = std::min(static_cast<int>(std::floor(g.x())), dims_.x() - 2);
  int j0 = std::min(static_cast<int>(std::floor(g.y())), dims_.y() - 2);
  int k0 = std::min(static_cast<int>(std::floor(g.z())), dims_.z() - 2);
  i0 = std::max(i0, 0);
  j0 = std::max(j0, 0);
  k0 = std::max(k0, 0);
  const double fx = std::clamp(g.x() - i0, 0.0, 1.0);
  const double fy = std::clamp(g.y() - j0, 0.0, 1.0);
  const double fz = std::clamp(g.z() - k0, 0.0, 1.0);

  auto at = [&](int di, int dj, int dk) {
    const int i = std::min(i0 + di, dims_.x() - 1);
    const int j = std::min(j0 + dj, dims_.y() - 1);
    const int k = std::min(k0 + dk, dims_.z() - 1);
    return field[index(i, j, k)];
  };
  const double c00 = at(0, 0, 0) * (1 - fx) + at(1, 0, 0) * fx;
  const double c10 = at(0, 1, 0) * (1 - fx) + at(1, 1, 0) * fx;
  const double c01 = at(0, 0, 1) * (1 - fx) + at(1, 0, 1) * fx;
  const double c11 = at(0, 1, 1) * (1 - fx) + at(1, 1, 1) * fx;
  const double c0 = c00 * (1 - fy) + c10 * fy;
  const double c1 = c01 * (1 - fy) + c11 * fy;
  const double v = c0 * (1 - fz) + c1 * fz;
  return add_outside ? v + outside : v;
}

namespace {

// Felzenszwalb-Huttenlocher 1D squared distance transform.
void dt1d(std::vector<double>& f, int n, std::vector<int>& v, std::vector<double>& z,
          std::vector<double>& d) {
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    d[q] = (q - v[k]) * (q - v[k]) + f[v[k]];
  }
}

// Exact squared Euclidean cell distance to the nearest seed cell.
std::vector<double> edt3(const VoxelGrid& grid, const std::vector<std::uint8_t>& seed) {
  const int nx = grid.dims().x(), ny = grid.dims().y(), nz = grid.dims().z();
  std::vector<double> dist(grid.cell_count());
  for (std::size_t c = 0; c < dist.size(); ++c) dist[c] = seed[c] ? 0.0 : kInf;

  const int nmax = std::max({nx, ny, nz});
  std::vector<double> f(nmax), d(nmax), z(nmax + 1);
  std::vector<int> v(nmax);

  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) f[i] = dist[grid.index(i, j, k)];
      dt1d(f, nx, v, z, d);
      for (int i = 0; i < nx; ++i) dist[grid.index(i, j, k)] = d[i];
    }
  for (int k = 0; k < nz; ++k)
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) f[j] = dist[grid.index(i, j, k)];
      dt1d(f, ny, v, z, d);
      for (int j = 0; j < ny; ++j) dist[grid.index(i, j, k)] = d[j];
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      for (int k = 0; k < nz; ++k) f[k] = dist[grid.index(i, j, k)];
      dt1d(f, nz, v, z, d);
      for (int k = 0; k < nz; ++k) dist[grid.index(i, j, k)] = d[k];
    }
  return dist;
}

}  // namespace

DistanceField build_distance_field(const VoxelGrid& grid, const TargetVolume& volume) {
  const double slack = 1e-9;
  if ((volume.min.array() < grid.world_min().array() - slack).any() ||
      (volume.max.array() > grid.world_max().array() + slack).any())
    raise(ErrorCode::volume_outside_grid, "target volume extends beyond the voxel grid");

  DistanceField field;
  field.origin_ = grid.origin();
  field.cell_size_ = grid.cell_size();
  field.dims_ = grid.dims();

  const int nx = grid.dims().x(), ny = grid.dims().y(), nz = grid.dims().z();
  const double cs = grid.cell_size();
  const double cap = (grid.world_max() - grid.world_min()).norm() + cs;

  std::vector<std::uint8_t> free_mask(grid.cell_count());
  bool any_occ = false, any_free = false;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    free_mask[c] = grid.occupancy()[c] ? 0 : 1;
    any_occ |= grid.occupancy()[c] != 0;
    any_free |= grid.occupancy()[c] == 0;
  }

  field.sdist_.assign(grid.cell_count(), cap);
  if (any_occ && any_free) {
    const std::vector<double> to_occ = edt3(grid, grid.occupancy());
    const std::vector<double> to_free = edt3(grid, free_mask);
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
      field.sdist_[c] = grid.occupancy()[c] ? -std::min(std::sqrt(to_free[c]) * cs, cap)
                                            : std::min(std::sqrt(to_occ[c]) * cs, cap);
    }
  } else if (any_occ) {
    std::fill(field.sdist_.begin(), field.sdist_.end(), -cap);
  }

  // Axis-ray clearance {+x, -x, +y, -y, +z}: cells to the nearest occupied
  // cell along the ray, capped at the target-volume boundary.
  field.clearance_.assign(grid.cell_count(), kInf);
  auto scan = [&](int axis, int dir) {
    const int n[3] = {nx, ny, nz};
    int u = (axis + 1) % 3, w = (axis + 2) % 3;
    for (int a = 0; a < n[u]; ++a)
      for (int b = 0; b < n[w]; ++b) {
        int steps_to_occ = -1;  // -1: none seen
        const int len = n[axis];
        for (int s = 0; s < len; ++s) {
          const int t = dir > 0 ? len - 1 - s : s;
          int idx[3];
          idx[axis] = t;
          idx[u] = a;
          idx[w] = b;
          const std::size_t c = grid.index(idx[0], idx[1], idx[2]);
          if (grid.occupancy()[c]) {
            steps_to_occ = 0;
          } else if (steps_to_occ >= 0) {
            ++steps_to_occ;
          }
          const double d_occ = steps_to_occ >= 0 ? steps_to_occ * cs : kInf;
          const Vec3 center = grid.cell_center(idx[0], idx[1], idx[2]);
          const double d_vol = dir > 0 ? volume.max[axis] - center[axis]
                                       : center[axis] - volume.min[axis];
          const double d = std::min(d_occ, std::max(d_vol, 0.0));
          field.clearance_[c] = std::min(field.clearance_[c], d);
        }
      }
  };
  scan(0, +1);
  scan(0, -1);
  scan(1, +1);
  scan(1, -1);
  scan(2, +1);
  return field;
}

// ---------------------------------------------------------------------------
// Placement regions
// ---------------------------------------------------------------------------

void PlacementRegion::finalize() {
  cell_set.clear();
  aabb2d.setEmpty();
  for (const auto& c : cells) {
    cell_set.insert(pack(c.x(), c.y()));
    const Eigen::Vector2d lo = cell_min(c);
    aabb2d.extend(lo);
    aabb2d.extend(Eigen::Vector2d(lo.x() + cell_size, lo.y() + cell_size));
  }
}

double PlacementRegion::xy_distance(double x, double y) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cells) {
    const Eigen::Vector2d lo = cell_min(c);
    const double dx = std::max({lo.x() - x, 0.0, x - (lo.x() + cell_size)});
    const double dy = std::max({lo.y() - y, 0.0, y - (lo.y() + cell_size)});
    best = std::min(best, std::hypot(dx, dy));
    if (best == 0.0) return 0.0;
  }
  return best;
}

double PlacementRegion::surface_distance(const Vec3& p) const {
  return std::hypot(xy_distance(p.x(), p.y()), p.z() - z);
}

std::vector<RegionPtr> extract_regions(const VoxelGrid& grid, const TargetVolume& volume,
                                       double clearance_height) {
  const int nx = grid.dims().x(), ny = grid.dims().y(), nz = grid.dims().z();
  const double cs = grid.cell_size();
  const int clear_cells = std::max(1, static_cast<int>(std::ceil(clearance_height / cs - 1e-9)));

  // Support cells per layer; layer -1 is the grid floor.
  auto free_at = [&](int i, int j, int k) { return k >= nz ? true : !grid.occupied(i, j, k); };
  auto is_support = [&](int i, int j, int k) {
    if (k >= 0 && !grid.occupied(i, j, k)) return false;
    const double z = grid.origin().z() + (k + 1) * cs;
    if (z < volume.min.z() - 1e-12 || z > volume.max.z() + 1e-12) return false;
    const Vec3 center = grid.cell_center(i, j, std::max(k, 0));
    if (center.x() < volume.min.x() || center.x() > volume.max.x() ||
        center.y() < volume.min.y() || center.y() > volume.max.y())
      return false;
    for (int dk = 1; dk <= clear_cells; ++dk)
      if (!free_at(i, j, k + dk)) return false;
    return true;
  };

  std::vector<RegionPtr> regions;
  std::unordered_set<std::int64_t> visited;  // packs (layer+1, i, j)
  auto pack3 = [&](int i, int j, int k) {
    return (static_cast<std::int64_t>(k + 1) << 42) | (static_cast<std::int64_t>(i) << 21) |
           static_cast<std::int64_t>(j);
  };

  for (int k = -1; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (visited.count(pack3(i, j, k)) || !is_support(i, j, k)) continue;
        auto region = std::make_shared<PlacementRegion>();
        region->id = static_cast<int>(regions.size());
        region->layer = k;
        region->z = grid.origin().z() + (k + 1) * cs;
        region->grid_origin = grid.origin();
        region->cell_size = cs;

        std::deque<Eigen::Vector2i> queue{{i, j}};
        visited.insert(pack3(i, j, k));
        while (!queue.empty()) {
          const Eigen::Vector2i c = queue.front();
          queue.pop_front();
          region->cells.push_back(c);
          const int di[4] = {1, -1, 0, 0};
          const int dj[4] = {0, 0, 1, -1};
          for (int d = 0; d < 4; ++d) {
            const int ni = c.x() + di[d], nj = c.y() + dj[d];
            if (ni < 0 || nj < 0 || ni >= nx || nj >= ny) continue;
            if (visited.count(pack3(ni, nj, k))) continue;
            if (!is_support(ni, nj, k)) continue;
            visited.insert(pack3(ni, nj, k));
            queue.push_back({ni, nj});
          }
        }
        region->finalize();
        regions.push_back(std::move(region));
      }
  return regions;
}

std::vector<RegionPtr> split_region(const PlacementRegion& region) {
  if (region.cells.empty())
    raise(ErrorCode::degenerate_input, "cannot split an empty region");
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& c : region.cells) {
    mean_x += region.grid_origin.x() + (c.x() + 0.5) * region.cell_size;
    mean_y += region.grid_origin.y() + (c.y() + 0.5) * region.cell_size;
  }
  mean_x /= static_cast<double>(region.cells.size());
  mean_y /= static_cast<double>(region.cells.size());

  std::vector<PlacementRegion> quads(4);
  for (const auto& c : region.cells) {
    const double cx = region.grid_origin.x() + (c.x() + 0.5) * region.cell_size;
    const double cy = region.grid_origin.y() + (c.y() + 0.5) * region.cell_size;
    const int q = (cx < mean_x ? 0 : 2) + (cy < mean_y ? 0 : 1);
    quads[q].cells.push_back(c);
  }
  std::vector<RegionPtr> out;
  for (auto& q : quads) {
    if (q.cells.empty()) continue;
    q.id = -1;
    q.z = region.z;
    q.layer = region.layer;
    q.grid_origin = region.grid_origin;
    q.cell_size = region.cell_size;
    q.finalize();
    out.push_back(std::make_shared<PlacementRegion>(std::move(q)));
  }
  return out;
}

Vec3 sample_point(const PlacementRegion& region, Rng& rng) {
  if (region.cells.empty())
    raise(ErrorCode::degenerate_input, "cannot sample an empty region");
  std::uniform_int_distribution<std::size_t> pick(0, region.cells.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::Vector2i c = region.cells[pick(rng)];
  const Eigen::Vector2d lo = region.cell_min(c);
  return Vec3(lo.x() + unit(rng) * region.cell_size, lo.y() + unit(rng) * region.cell_size,
              region.z);
}

}  // namespace placement
