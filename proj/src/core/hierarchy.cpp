#include "core/hierarchy.hpp"

namespace placement {

AfrNode afr_root() { return AfrNode{}; }

bool afr_is_leaf(const AfrNode& node, const HierarchyParams& params, double cell_size) {
  if (node.depth < 3) return false;
  return node.region->area() <= params.resolved_min_area(cell_size) + 1e-12 ||
         (node.theta_hi - node.theta_lo) <= params.min_theta + 1e-12;
}

std::vector<AfrNode> afr_children(const AfrNode& node, const AfrContext& ctx) {
  std::vector<AfrNode> children;
  if (node.depth == 0) {
    for (int a = 0; a < ctx.arm_count; ++a) {
      AfrNode c;
      c.depth = 1;
      c.arm = a;
      children.push_back(c);
    }
    return children;
  }
  if (node.depth == 1) {
    for (int f = 0; f < static_cast<int>(ctx.faces->size()); ++f) {
      AfrNode c;
      c.depth = 2;
      c.arm = node.arm;
      c.face = f;
      children.push_back(c);
    }
    return children;
  }
  if (node.depth == 2) {
    for (const auto& r : ctx.regions) {
      AfrNode c;
      c.depth = 3;
      c.arm = node.arm;
      c.face = node.face;
      c.region = r;
      children.push_back(c);
    }
    return children;
  }

  if (afr_is_leaf(node, ctx.params, ctx.cell_size))
    raise(ErrorCode::leaf_node, "leaf nodes of the hierarchy have no children");

  const std::vector<RegionPtr> quadrants = split_region(*node.region);
  const int l = std::max(ctx.params.l, 1);
  const double span = (node.theta_hi - node.theta_lo) / l;
  for (const auto& quad : quadrants)
    for (int t = 0; t < l; ++t) {
      AfrNode c;
      c.depth = node.depth + 1;
      c.arm = node.arm;
      c.face = node.face;
      c.region = quad;
      c.theta_lo = node.theta_lo + t * span;
      c.theta_hi = t + 1 == l ? node.theta_hi : node.theta_lo + (t + 1) * span;
      children.push_back(c);
    }
  return children;
}

Pose afr_sample_pose(const AfrNode& node, const AfrContext& ctx, Rng& rng) {
  if (!node.sampleable())
    raise(ErrorCode::precondition_failed, "pose sampling needs a node at depth >= 3");
  const Vec3 p = sample_point(*node.region, rng);
  std::uniform_real_distribution<double> theta(node.theta_lo, node.theta_hi);
  return pose_from_parameters(p.z(), p.x(), p.y(), theta(rng), (*ctx.faces)[node.face]);
}

}  // namespace placement
