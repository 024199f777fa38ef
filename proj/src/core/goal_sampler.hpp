#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "core/constraints.hpp"
#include "core/hierarchy.hpp"

namespace placement {

struct SamplerParams {
  double exploration_c = M_SQRT1_2;
  int ik_seeds = 10;
  IkParams ik;
};

/// A collision-free arm configuration reaching a verified placement pose.
struct GoalSample {
  Configuration config;
  int arm = 0;
  int face = 0;
  Pose pose;       // object_pose(config)
  double xi = 0.0;
};

/// UCB1 child score: mean reward plus c * sqrt(2 ln(parent visits) / visits).
double ucb1_score(double child_reward, std::uint64_t child_visits,
                  std::uint64_t parent_visits, double c);

struct GoalContext {
  AfrContext hierarchy;
  const DistanceField* field = nullptr;
  const ObjectModel* obj = nullptr;
  const std::vector<ArmModel>* arms = nullptr;
  const std::vector<Grasp>* grasps = nullptr;  // one per arm
  const Objective* objective = nullptr;
  ConstraintParams constraints;  // resolved
  SamplerParams sampler;
};

/// Persistent MCTS state over the AFR hierarchy. Stored nodes carry visit
/// counts and accumulated rewards; children enter the tree lazily through
/// AddChild during selection.
class SamplerTree {
 public:
  explicit SamplerTree(AfrContext ctx);

  /// Alg. 3: three forced child selections, then descent while the current
  /// node is visited and not a leaf. Newly visited children are added to the
  /// tree (uniform random among the unexpanded). Returns the node id.
  int select(double exploration_c, Rng& rng);

  /// Propagates one sample: visits increment by one and the reward (1/0 for
  /// leaves by full validity, the heuristic otherwise) accumulates along the
  /// path to the root.
  void update(int node, const ValidityReport& report, bool leaf,
              const ConstraintParams& params);

  /// Optimistic score for expanding a new child of `node`: sibling mean of
  /// means plus exploration with the expanded-child count in place of
  /// visits. -inf when no unexpanded child remains; +inf (forced) when the
  /// node has no expanded children.
  double new_child_score(int node, double c) const;

  const AfrNode& afr(int node) const { return nodes_[node].afr; }
  bool is_leaf(int node) const { return nodes_[node].leaf; }
  std::uint64_t visits(int node) const { return nodes_[node].visits; }
  double reward(int node) const { return nodes_[node].reward; }
  int parent(int node) const { return nodes_[node].parent; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<int>& expanded_children(int node) const { return nodes_[node].expanded; }
  const AfrContext& context() const { return ctx_; }

  void for_each_node(const std::function<void(int)>& fn) const {
    for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) fn(i);
  }

 private:
  struct StoredNode {
    AfrNode afr;
    int parent = -1;
    std::uint64_t visits = 0;
    double reward = 0.0;
    bool leaf = false;
    std::optional<std::vector<AfrNode>> all_children;
    std::vector<int> expanded;           // tree ids
    std::vector<int> expanded_enum_idx;  // indices into all_children
  };

  const std::vector<AfrNode>& children_of(int node);
  int add_child(int node, Rng& rng);
  int select_child(int node, double c, Rng& rng);

  AfrContext ctx_;
  std::vector<StoredNode> nodes_;
};

/// Alg. 2: g_max select/sample/validate/update iterations against the tree.
/// Returns every sample whose pose and configuration satisfy stability,
/// collision freedom and strict objective improvement over xi_best.
std::vector<GoalSample> sample_goals(SamplerTree& tree, int g_max, double xi_best,
                                     const GoalContext& ctx, Rng& rng);

/// Ablation baseline: uniform random depth-3 cell each iteration (full
/// orientation range), no tree state.
std::vector<GoalSample> sample_goals_uniform(int g_max, double xi_best, const GoalContext& ctx,
                                             Rng& rng);

}  // namespace placement
