#include "core/goal_sampler.hpp"

#include <cmath>

namespace placement {

double ucb1_score(double child_reward, std::uint64_t child_visits,
                  std::uint64_t parent_visits, double c) {
  const double mean = child_reward / static_cast<double>(child_visits);
  return mean + c * std::sqrt(2.0 * std::log(static_cast<double>(parent_visits)) /
                              static_cast<double>(child_visits));
}

SamplerTree::SamplerTree(AfrContext ctx) : ctx_(std::move(ctx)) {
  StoredNode root;
  root.afr = afr_root();
  nodes_.push_back(std::move(root));
}

const std::vector<AfrNode>& SamplerTree::children_of(int node) {
  StoredNode& n = nodes_[node];
  if (!n.all_children) n.all_children = afr_children(n.afr, ctx_);
  return *n.all_children;
}

int SamplerTree::add_child(int node, Rng& rng) {
  const auto& all = children_of(node);
  StoredNode& n = nodes_[node];
  std::vector<int> unexpanded;
  unexpanded.reserve(all.size());
  for (int i = 0; i < static_cast<int>(all.size()); ++i) {
    bool taken = false;
    for (int e : n.expanded_enum_idx) taken |= (e == i);
    if (!taken) unexpanded.push_back(i);
  }
  if (unexpanded.empty())
    raise(ErrorCode::exhausted, "no unexpanded child to add");
  std::uniform_int_distribution<std::size_t> pick(0, unexpanded.size() - 1);
  const int enum_idx = unexpanded[pick(rng)];

  StoredNode child;
  child.afr = all[enum_idx];
  child.parent = node;
  child.leaf = afr_is_leaf(child.afr, ctx_.params, ctx_.cell_size);
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(child));
  nodes_[node].expanded.push_back(id);
  nodes_[node].expanded_enum_idx.push_back(enum_idx);
  return id;
}

double SamplerTree::new_child_score(int node, double c) const {
  const StoredNode& n = nodes_[node];
  const std::size_t total = n.all_children ? n.all_children->size() : 0;
  if (n.all_children && n.expanded.size() >= total)
    return -std::numeric_limits<double>::infinity();
  if (n.expanded.empty()) return std::numeric_limits<double>::infinity();
  double mean_of_means = 0.0;
  for (int child : n.expanded) {
    const StoredNode& ch = nodes_[child];
    mean_of_means += ch.reward / static_cast<double>(ch.visits);
  }
  const double j = static_cast<double>(n.expanded.size());
  mean_of_means /= j;
  return mean_of_means + c * std::sqrt(2.0 * std::log(static_cast<double>(n.visits)) / j);
}

int SamplerTree::select_child(int node, double c, Rng& rng) {
  const std::size_t total = children_of(node).size();
  if (total == 0)
    raise(ErrorCode::exhausted, "hierarchy node has no children to select");
  StoredNode& n = nodes_[node];
  if (n.expanded.empty()) return add_child(node, rng);

  double best = -std::numeric_limits<double>::infinity();
  int best_child = -1;
  for (int child : n.expanded) {
    const StoredNode& ch = nodes_[child];
    const double u = ucb1_score(ch.reward, ch.visits, n.visits, c);
    if (u > best) {
      best = u;
      best_child = child;
    }
  }
  if (n.expanded.size() < total && new_child_score(node, c) > best)
    return add_child(node, rng);
  return best_child;
}

int SamplerTree::select(double exploration_c, Rng& rng) {
  int node = 0;
  for (int d = 1; d <= 3; ++d) node = select_child(node, exploration_c, rng);
  while (nodes_[node].visits > 0 && !nodes_[node].leaf)
    node = select_child(node, exploration_c, rng);
  return node;
}

void SamplerTree::update(int node, const ValidityReport& report, bool leaf,
                         const ConstraintParams& params) {
  const double delta =
      leaf ? (report.fully_valid() ? 1.0 : 0.0) : heuristic_value(report, params);
  for (int cur = node; cur >= 0; cur = nodes_[cur].parent) {
    nodes_[cur].visits += 1;
    nodes_[cur].reward += delta;
  }
}

namespace {

// One sample/validate/IK pass for a depth-3+ cell. Appends to goals on
// success and returns the report for the tree update.
ValidityReport sample_once(const AfrNode& node, double xi_best, const GoalContext& ctx,
                           Rng& rng, std::vector<GoalSample>& goals) {
  const ArmModel& arm = (*ctx.arms)[node.arm];
  const Grasp& grasp = (*ctx.grasps)[node.arm];
  const PlacementFace& face = (*ctx.hierarchy.faces)[node.face];
  const ConstraintParams& cp = ctx.constraints;

  const Pose x = afr_sample_pose(node, ctx.hierarchy, rng);

  const bool stable = is_stable(x, face, ctx.hierarchy.regions, cp.stability_tol);
  const bool obj_free = is_object_collision_free(x, *ctx.obj, *ctx.field, cp.contact_offset);
  const double xi = (*ctx.objective)(x);
  const bool pose_ok = stable && obj_free && xi > xi_best;

  std::optional<Eigen::VectorXd> q;
  bool ik_attempted = false;
  if (pose_ok) {
    ik_attempted = true;
    const Pose gripper_target = x * grasp.gripper_in_object;
    q = solve_ik(arm, gripper_target, ctx.sampler.ik_seeds, rng, ctx.sampler.ik);
    if (q) {
      const HeldObject held{ctx.obj, &grasp};
      if (is_config_collision_free(arm, *q, *ctx.field, held, cp.contact_offset)) {
        // Accept against the pose actually reached, not the sampled one.
        const Pose reached = object_pose(arm, grasp, *q);
        const double xi_reached = (*ctx.objective)(reached);
        if (is_stable(reached, face, ctx.hierarchy.regions, cp.stability_tol) &&
            is_object_collision_free(reached, *ctx.obj, *ctx.field, cp.contact_offset) &&
            xi_reached > xi_best) {
          GoalSample g;
          g.config = Configuration{*q, node.arm};
          g.arm = node.arm;
          g.face = node.face;
          g.pose = reached;
          g.xi = xi_reached;
          goals.push_back(std::move(g));
        }
      }
    }
  }

  ConstraintContext cc;
  cc.faces = ctx.hierarchy.faces;
  cc.all_regions = &ctx.hierarchy.regions;
  cc.field = ctx.field;
  cc.obj = ctx.obj;
  cc.objective = ctx.objective;
  cc.xi_best = xi_best;
  cc.arm = &arm;
  cc.grasp = &grasp;
  cc.params = cp;
  ValidityReport rep = error_terms(x, q, node, cc);
  if (ik_attempted && !q) rep.arm_stage = ArmStage::ik_failed;
  return rep;
}

}  // namespace

std::vector<GoalSample> sample_goals(SamplerTree& tree, int g_max, double xi_best,
                                     const GoalContext& ctx, Rng& rng) {
  std::vector<GoalSample> goals;
  for (int i = 0; i < g_max; ++i) {
    const int node = tree.select(ctx.sampler.exploration_c, rng);
    const ValidityReport rep = sample_once(tree.afr(node), xi_best, ctx, rng, goals);
    tree.update(node, rep, tree.is_leaf(node), ctx.constraints);
  }
  return goals;
}

std::vector<GoalSample> sample_goals_uniform(int g_max, double xi_best, const GoalContext& ctx,
                                             Rng& rng) {
  std::vector<GoalSample> goals;
  const int arms = ctx.hierarchy.arm_count;
  const int faces = static_cast<int>(ctx.hierarchy.faces->size());
  const int regions = static_cast<int>(ctx.hierarchy.regions.size());
  if (arms == 0 || faces == 0 || regions == 0) return goals;
  for (int i = 0; i < g_max; ++i) {
    AfrNode node;
    node.depth = 3;
    node.arm = std::uniform_int_distribution<int>(0, arms - 1)(rng);
    node.face = std::uniform_int_distribution<int>(0, faces - 1)(rng);
    node.region = ctx.hierarchy.regions[std::uniform_int_distribution<int>(0, regions - 1)(rng)];
    sample_once(node, xi_best, ctx, rng, goals);
  }
  return goals;
}

}  // namespace placement
