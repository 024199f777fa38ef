#include "core/motion_planner.hpp"

#include <algorithm>
#include <cmath>

namespace placement {

MotionValidator::MotionValidator(const ArmModel* arm, const DistanceField* field,
                                 std::optional<HeldObject> held, SteerParams steer,
                                 double contact_offset)
    : arm_(arm), field_(field), held_(std::move(held)), steer_(steer),
      contact_offset_(contact_offset) {
  reach_bound_ = arm_->reach_bound();
  if (held_) {
    reach_bound_ += held_->grasp->gripper_in_object.position.norm() +
                    held_->obj->bounding_radius();
  }
}

Eigen::VectorXd MotionValidator::step_sizes() const {
  Eigen::VectorXd s(arm_->dof());
  for (int i = 0; i < arm_->dof(); ++i)
    s[i] = arm_->joints[i].type == JointType::revolute ? steer_.revolute_step
                                                       : steer_.prismatic_step;
  return s;
}

bool MotionValidator::config_valid(const Eigen::VectorXd& q) const {
  if (!arm_->within_limits(q)) return false;
  return is_config_collision_free(*arm_, q, *field_, held_, contact_offset_);
}

bool MotionValidator::edge_valid(const Eigen::VectorXd& from, const Eigen::VectorXd& to) const {
  const Eigen::VectorXd delta = to - from;
  const Eigen::VectorXd steps = step_sizes();
  double frac = 0.0;  // in units of half steering steps
  double sweep = 0.0;  // conservative workspace travel, m
  for (int i = 0; i < delta.size(); ++i) {
    frac = std::max(frac, std::abs(delta[i]) / (steps[i] / 2.0));
    sweep += std::abs(delta[i]) * (arm_->joints[i].type == JointType::revolute
                                       ? reach_bound_
                                       : 1.0);
  }
  const double cell = field_->cell_size();
  const int n = std::max(1, static_cast<int>(std::ceil(std::max(frac, sweep / cell))));
  for (int s = 1; s <= n; ++s) {
    const double t = static_cast<double>(s) / n;
    if (!config_valid(from + t * delta)) return false;
  }
  return true;
}

bool MotionValidator::path_valid(const Path& path) const {
  if (path.waypoints.empty()) return false;
  if (!config_valid(path.waypoints.front())) return false;
  for (std::size_t i = 1; i < path.waypoints.size(); ++i)
    if (!edge_valid(path.waypoints[i - 1], path.waypoints[i])) return false;
  return true;
}

MultiGoalRrt::MultiGoalRrt(const ArmModel* arm, const DistanceField* field,
                           std::optional<HeldObject> held, const Eigen::VectorXd& q_start,
                           SteerParams steer, double contact_offset, int arm_index)
    : validator_(arm, field, std::move(held), steer, contact_offset), q_start_(q_start),
      arm_index_(arm_index) {
  if (!validator_.config_valid(q_start))
    raise(ErrorCode::precondition_failed, "start configuration is invalid");
  forward_.nodes.push_back(q_start);
  forward_.parent.push_back(-1);
}

int MultiGoalRrt::add_goal(const GoalSample& goal) {
  if (!validator_.config_valid(goal.config.q))
    raise(ErrorCode::invalid_goal, "goal configuration is in collision or out of limits");
  Tree tree;
  tree.nodes.push_back(goal.config.q);
  tree.parent.push_back(-1);
  tree.goal_id = next_goal_id_++;
  tree.live = true;
  backward_.push_back(std::move(tree));
  goal_state_[backward_.back().goal_id] = 0;
  return backward_.back().goal_id;
}

void MultiGoalRrt::remove_goal(int goal_id) {
  auto it = goal_state_.find(goal_id);
  if (it == goal_state_.end() || it->second != 0)
    raise(ErrorCode::unknown_goal, "goal id is not live");
  it->second = 1;
  for (auto& t : backward_)
    if (t.goal_id == goal_id) t.live = false;
}

int MultiGoalRrt::live_goal_count() const {
  int n = 0;
  for (const auto& kv : goal_state_) n += kv.second == 0 ? 1 : 0;
  return n;
}

std::size_t MultiGoalRrt::total_tree_size() const {
  std::size_t n = forward_.nodes.size();
  for (const auto& t : backward_) n += t.nodes.size();
  return n;
}

int MultiGoalRrt::nearest(const Tree& tree, const Eigen::VectorXd& q) const {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(tree.nodes.size()); ++i) {
    const double d = (tree.nodes[i] - q).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

Eigen::VectorXd MultiGoalRrt::steer(const Eigen::VectorXd& from,
                                    const Eigen::VectorXd& to) const {
  Eigen::VectorXd delta = to - from;
  const Eigen::VectorXd steps = validator_.step_sizes();
  double scale = 1.0;
  for (int i = 0; i < delta.size(); ++i)
    scale = std::max(scale, std::abs(delta[i]) / steps[i]);
  return from + delta / scale;
}

Eigen::VectorXd MultiGoalRrt::sample_config(Rng& rng) {
  Eigen::VectorXd q(validator_.arm().dof());
  for (int i = 0; i < q.size(); ++i) {
    std::uniform_real_distribution<double> dist(validator_.arm().joints[i].lo,
                                                validator_.arm().joints[i].hi);
    q[i] = dist(rng);
  }
  return q;
}

std::optional<int> MultiGoalRrt::extend(Tree& tree, const Eigen::VectorXd& target, Rng& rng) {
  (void)rng;
  const int near = nearest(tree, target);
  const Eigen::VectorXd q_new = steer(tree.nodes[near], target);
  if (!validator_.edge_valid(tree.nodes[near], q_new)) return std::nullopt;
  tree.nodes.push_back(q_new);
  tree.parent.push_back(near);
  return static_cast<int>(tree.nodes.size()) - 1;
}

std::optional<int> MultiGoalRrt::connect(Tree& tree, const Eigen::VectorXd& target) {
  int cur = nearest(tree, target);
  while (true) {
    const Eigen::VectorXd& q_cur = tree.nodes[cur];
    if ((q_cur - target).norm() < 1e-12) return cur;
    const Eigen::VectorXd q_new = steer(q_cur, target);
    if (!validator_.edge_valid(q_cur, q_new)) return std::nullopt;
    tree.nodes.push_back(q_new);
    tree.parent.push_back(cur);
    cur = static_cast<int>(tree.nodes.size()) - 1;
    if ((q_new - target).norm() < 1e-12) return cur;
  }
}

int MultiGoalRrt::next_backward_tree() {
  if (backward_.empty()) return -1;
  // Weighted round-robin: live trees appear twice per cycle, dead ones once.
  std::vector<std::size_t> tickets;
  for (std::size_t i = 0; i < backward_.size(); ++i) {
    tickets.push_back(i);
    if (backward_[i].live) tickets.push_back(i);
  }
  if (tickets.empty()) return -1;
  const std::size_t pick = tickets[rr_cursor_ % tickets.size()];
  ++rr_cursor_;
  return static_cast<int>(pick);
}

std::optional<MultiGoalRrt::Result> MultiGoalRrt::merge(int forward_node,
                                                        std::size_t backward_idx,
                                                        int backward_node) {
  Tree tree = std::move(backward_[backward_idx]);
  backward_.erase(backward_.begin() + backward_idx);

  // Graft the backward tree onto the forward tree, re-rooting it at the
  // connection node. Edges are undirected for validity, so reversing the
  // parent chain along connection->goal is sound.
  const int offset = static_cast<int>(forward_.nodes.size());
  std::vector<int> chain;
  for (int cur = backward_node; cur >= 0; cur = tree.parent[cur]) chain.push_back(cur);

  std::vector<int> new_parent(tree.nodes.size(), -2);
  for (std::size_t i = 0; i < chain.size(); ++i)
    new_parent[chain[i]] = i == 0 ? forward_node : offset + chain[i - 1];
  for (int i = 0; i < static_cast<int>(tree.nodes.size()); ++i) {
    if (new_parent[i] != -2) continue;
    // Off-chain nodes keep their parents (now pointing toward the chain).
    new_parent[i] = offset + tree.parent[i];
  }
  for (int i = 0; i < static_cast<int>(tree.nodes.size()); ++i) {
    forward_.nodes.push_back(tree.nodes[i]);
    forward_.parent.push_back(new_parent[i]);
  }

  if (!tree.live) {
    ++stats_.merges_dead;
    return std::nullopt;
  }
  ++stats_.merges_live;
  ++stats_.successes;
  goal_state_[tree.goal_id] = 2;

  Path path;
  path.arm = arm_index_;
  const int goal_in_forward = offset + 0;  // backward root was node 0
  for (int cur = goal_in_forward; cur >= 0; cur = forward_.parent[cur])
    path.waypoints.push_back(forward_.nodes[cur]);
  std::reverse(path.waypoints.begin(), path.waypoints.end());
  return Result{std::move(path), tree.goal_id};
}

std::optional<MultiGoalRrt::Result> MultiGoalRrt::plan(int m_max, Rng& rng) {
  if (live_goal_count() == 0) return std::nullopt;
  for (int it = 0; it < m_max; ++it) {
    const Eigen::VectorXd q_rand = sample_config(rng);
    if (it % 2 == 0) {
      // Forward extension, then try to connect the best backward tree.
      const auto added = extend(forward_, q_rand, rng);
      if (!added) continue;
      const Eigen::VectorXd& q_new = forward_.nodes[*added];
      int best_tree = -1, best_node = -1;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < backward_.size(); ++t) {
        const int n = nearest(backward_[t], q_new);
        const double d = (backward_[t].nodes[n] - q_new).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best_tree = static_cast<int>(t);
          best_node = n;
        }
      }
      if (best_tree < 0) continue;
      const auto reached = connect(backward_[best_tree], q_new);
      if (!reached) continue;
      const auto result = merge(*added, best_tree, *reached);
      if (result) return result;
    } else {
      const int t = next_backward_tree();
      if (t < 0) continue;
      const auto added = extend(backward_[t], q_rand, rng);
      if (!added) continue;
      const Eigen::VectorXd q_new = backward_[t].nodes[*added];
      const auto reached = connect(forward_, q_new);
      if (!reached) continue;
      const auto result = merge(*reached, t, *added);
      if (result) return result;
    }
  }
  return std::nullopt;
}

}  // namespace placement
