#pragma once

#include <vector>

#include "core/geometry.hpp"
#include "core/world.hpp"

namespace placement {

struct HierarchyParams {
  int l = 4;                    // angular subdivisions per split
  double min_area = 0.0;        // m^2; resolved to 4 cell areas when <= 0
  double min_theta = M_PI / 16;  // rad

  double resolved_min_area(double cell_size) const {
    return min_area > 0.0 ? min_area : 4.0 * cell_size * cell_size;
  }
};

/// A cell of the arm-face-region hierarchy. Depth 0 is the root; depths 1-3
/// pick arm, placement face and region; deeper nodes carry subdivided
/// regions and orientation intervals.
struct AfrNode {
  int depth = 0;
  int arm = -1;
  int face = -1;
  RegionPtr region;
  double theta_lo = 0.0;
  double theta_hi = 2.0 * M_PI;

  bool sampleable() const { return depth >= 3; }
};

struct AfrContext {
  int arm_count = 0;
  const std::vector<PlacementFace>* faces = nullptr;
  std::vector<RegionPtr> regions;  // top-level, extraction order
  HierarchyParams params;
  double cell_size = 0.01;
};

AfrNode afr_root();

/// Child cells in deterministic order: arms, faces and regions by index at
/// depths 0-2; below that the cross product of the region quadrants with l
/// equal orientation sub-intervals (quadrant-major, theta ascending).
/// Throws leaf_node when called on a leaf.
std::vector<AfrNode> afr_children(const AfrNode& node, const AfrContext& ctx);

/// Leaves exist only at depth >= 3: region area or theta span at or below
/// the configured minimum.
bool afr_is_leaf(const AfrNode& node, const HierarchyParams& params, double cell_size);

/// Uniform pose draw from the node's cell (requires depth >= 3).
Pose afr_sample_pose(const AfrNode& node, const AfrContext& ctx, Rng& rng);

}  // namespace placement
