#pragma once

#include <map>
#include <optional>

#include "core/constraints.hpp"
#include "core/goal_sampler.hpp"

namespace placement {

struct SteerParams {
  double revolute_step = 0.1;   // rad per joint per extension
  double prismatic_step = 0.05;  // m per joint per extension
};

/// Joint-space path for one arm; waypoints run from the start configuration
/// to the goal, consecutive waypoints within one steering step.
struct Path {
  int arm = 0;
  std::vector<Eigen::VectorXd> waypoints;
};

/// Collision validation used for tree edges and path re-validation: samples
/// the straight segment densely enough that no point of the arm or the held
/// object moves more than one grid cell between checks.
class MotionValidator {
 public:
  MotionValidator(const ArmModel* arm, const DistanceField* field,
                  std::optional<HeldObject> held, SteerParams steer, double contact_offset);

  bool config_valid(const Eigen::VectorXd& q) const;
  bool edge_valid(const Eigen::VectorXd& from, const Eigen::VectorXd& to) const;
  bool path_valid(const Path& path) const;
  const SteerParams& steer() const { return steer_; }
  const ArmModel& arm() const { return *arm_; }

  /// Per-joint steering step vector.
  Eigen::VectorXd step_sizes() const;

 private:
  const ArmModel* arm_;
  const DistanceField* field_;
  std::optional<HeldObject> held_;
  SteerParams steer_;
  double contact_offset_;
  double reach_bound_;
};

/// Bidirectional RRT with one forward tree from the start configuration and
/// one backward tree per goal. Goals can be added and removed between plan
/// calls without discarding the trees: removed goals' trees persist and may
/// merge into the forward tree, but never report success.
class MultiGoalRrt {
 public:
  MultiGoalRrt(const ArmModel* arm, const DistanceField* field, std::optional<HeldObject> held,
               const Eigen::VectorXd& q_start, SteerParams steer, double contact_offset,
               int arm_index = 0);

  /// Throws invalid_goal when the configuration is in collision.
  int add_goal(const GoalSample& goal);
  /// Throws unknown_goal for ids never issued or already removed/consumed.
  void remove_goal(int goal_id);

  struct Result {
    Path path;
    int goal_id = -1;
  };
  /// Runs up to m_max extend iterations, alternating the forward tree with a
  /// round-robin over backward trees (live trees get double frequency).
  /// Returns the first q_start-to-goal path through a live goal tree.
  std::optional<Result> plan(int m_max, Rng& rng);

  int live_goal_count() const;
  std::size_t forward_tree_size() const { return forward_.nodes.size(); }
  std::size_t total_tree_size() const;

  struct Stats {
    int merges_live = 0;
    int merges_dead = 0;
    int successes = 0;
  };
  const Stats& stats() const { return stats_; }

 private:
  struct Tree {
    std::vector<Eigen::VectorXd> nodes;
    std::vector<int> parent;
    int goal_id = -1;  // -1 for the forward tree
    bool live = false;
  };

  int nearest(const Tree& tree, const Eigen::VectorXd& q) const;
  Eigen::VectorXd steer(const Eigen::VectorXd& from, const Eigen::VectorXd& to) const;
  std::optional<int> extend(Tree& tree, const Eigen::VectorXd& target, Rng& rng);
  // Greedy connect toward target; returns the node index that reached it.
  std::optional<int> connect(Tree& tree, const Eigen::VectorXd& target);
  std::optional<Result> merge(int forward_node, std::size_t backward_idx, int backward_node);
  Eigen::VectorXd sample_config(Rng& rng);
  int next_backward_tree();

  MotionValidator validator_;
  Eigen::VectorXd q_start_;
  int arm_index_ = 0;
  Tree forward_;
  std::vector<Tree> backward_;
  std::map<int, int> goal_state_;  // goal_id -> 0 live, 1 removed, 2 consumed
  int next_goal_id_ = 0;
  std::size_t rr_cursor_ = 0;
  Stats stats_;
};

}  // namespace placement
