#include "core/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace placement {

namespace {

double object_height_over_face(const ObjectModel& obj, const PlacementFace& face) {
  // Height of the object above the support plane when resting on this face.
  double h = 0.0;
  for (const auto& p : obj.surface_points)
    h = std::max(h, -face.normal.dot(p - face.vertices[0]));
  return h;
}

}  // namespace

PreprocessResult preprocess(const VoxelGrid& grid, const TargetVolume& volume,
                            const ObjectModel& object, double stability_margin) {
  PreprocessResult out;
  PlacementFaceParams fp;
  fp.stability_margin = stability_margin;
  out.faces = extract_placement_faces(object, fp);
  out.field = build_distance_field(grid, volume);
  double min_height = std::numeric_limits<double>::infinity();
  for (const auto& f : out.faces)
    min_height = std::min(min_height, object_height_over_face(object, f));
  out.object_clearance_height = std::max(min_height, grid.cell_size());
  out.regions = extract_regions(grid, volume, out.object_clearance_height);
  return out;
}

Path optimize_locally(const Path& path, const LocalOptContext& ctx) {
  if (path.waypoints.empty()) return path;
  Path out = path;
  const ArmModel& arm = *ctx.arm;
  MotionValidator validator(ctx.arm, ctx.field, HeldObject{ctx.obj, ctx.grasp}, ctx.steer,
                            ctx.constraints.contact_offset);

  double mu = ctx.mu;
  bool backtracked = false;
  Eigen::VectorXd q = out.waypoints.back();
  double xi = (*ctx.objective)(object_pose(arm, *ctx.grasp, q));

  for (int step = 0; step < ctx.max_steps; ++step) {
    const Pose x = object_pose(arm, *ctx.grasp, q);
    const Vec3 g3 = numeric_gradient(*ctx.objective, x, ctx.trans_grad_step, ctx.rot_grad_step);
    if (g3.norm() < ctx.gradient_tolerance) break;

    Eigen::Matrix<double, 6, 1> twist;
    twist << g3.x(), g3.y(), 0.0, 0.0, 0.0, g3.z();
    const auto jac = jacobian(arm, q);
    const Eigen::VectorXd dq_dir =
        jac.completeOrthogonalDecomposition().pseudoInverse() * twist;

    bool accepted = false;
    while (true) {
      Eigen::VectorXd dq = mu * dq_dir;
      // Keep each appended edge within one steering step.
      const Eigen::VectorXd steps = validator.step_sizes();
      double scale = 1.0;
      for (int i = 0; i < dq.size(); ++i)
        scale = std::max(scale, std::abs(dq[i]) / steps[i]);
      dq /= scale;

      const Eigen::VectorXd q_new = arm.clamp_to_limits(q + dq);
      const Pose x_new = object_pose(arm, *ctx.grasp, q_new);
      const double xi_new = (*ctx.objective)(x_new);
      const bool ok =
          xi_new >= xi && (q_new - q).norm() > 1e-12 &&
          is_stable(x_new, *ctx.face, *ctx.regions, ctx.constraints.stability_tol) &&
          is_object_collision_free(x_new, *ctx.obj, *ctx.field,
                                   ctx.constraints.contact_offset) &&
          validator.edge_valid(q, q_new);
      if (ok) {
        q = q_new;
        xi = xi_new;
        out.waypoints.push_back(q);
        accepted = true;
        break;
      }
      if (backtracked) break;
      backtracked = true;
      mu /= 2.0;
    }
    if (!accepted) break;
  }
  return out;
}

std::optional<Solution> AnytimePlanner::run(const PlannerConfig& config,
                                            const PlannerInputs& inputs,
                                            const PublishCallback& publish,
                                            const std::atomic<bool>* stop) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  auto should_stop = [&](int iteration) {
    if (stop && stop->load()) return true;
    if (elapsed() >= config.time_limit) return true;
    if (config.max_iterations > 0 && iteration >= config.max_iterations) return true;
    return false;
  };

  const VoxelGrid& grid = *inputs.grid;
  const ObjectModel& object = *inputs.object;
  const std::vector<ArmModel>& arms = *inputs.arms;
  if (arms.empty() || inputs.grasps->size() != arms.size() ||
      inputs.start_configs.size() != arms.size())
    raise(ErrorCode::precondition_failed, "arms, grasps and start configs must align");

  PreprocessResult prep;
  try {
    prep = preprocess(grid, inputs.volume, object, config.stability_margin);
  } catch (const PlannerError& err) {
    raise(ErrorCode::precondition_failed, std::string("preprocessing failed: ") + err.what());
  }
  if (prep.regions.empty())
    raise(ErrorCode::precondition_failed, "no placement regions inside the target volume");

  const ConstraintParams cp = config.constraints.resolved(grid.cell_size());
  const Objective objective = make_objective(config.objective, &object, &prep.field);

  GoalContext goal_ctx;
  goal_ctx.hierarchy.arm_count = static_cast<int>(arms.size());
  goal_ctx.hierarchy.faces = &prep.faces;
  goal_ctx.hierarchy.regions = prep.regions;
  goal_ctx.hierarchy.params = config.hierarchy;
  goal_ctx.hierarchy.cell_size = grid.cell_size();
  goal_ctx.field = &prep.field;
  goal_ctx.obj = &object;
  goal_ctx.arms = &arms;
  goal_ctx.grasps = inputs.grasps;
  goal_ctx.objective = &objective;
  goal_ctx.constraints = cp;
  goal_ctx.sampler.exploration_c = config.exploration_c;
  goal_ctx.sampler.ik_seeds = config.ik_seeds;
  goal_ctx.sampler.ik = config.ik;

  std::vector<MultiGoalRrt> planners;
  planners.reserve(arms.size());
  for (std::size_t a = 0; a < arms.size(); ++a) {
    try {
      planners.emplace_back(&arms[a], &prep.field,
                            HeldObject{&object, &(*inputs.grasps)[a]},
                            inputs.start_configs[a], config.steer, cp.contact_offset,
                            static_cast<int>(a));
    } catch (const PlannerError&) {
      raise(ErrorCode::precondition_failed,
            "start configuration for arm " + arms[a].name + " is invalid");
    }
  }

  Rng rng(config.seed);
  SamplerTree tree(goal_ctx.hierarchy);
  double xi_best = -std::numeric_limits<double>::infinity();
  std::optional<Solution> best;

  struct GoalRec {
    int goal_id;
    int arm;
    int face;
    double xi;
  };
  std::vector<GoalRec> live_goals;

  int iteration = 0;
  std::size_t rr_arm = 0;
  while (!should_stop(iteration)) {
    std::vector<GoalSample> goals =
        config.mcts_sampler ? sample_goals(tree, config.g_max, xi_best, goal_ctx, rng)
                            : sample_goals_uniform(config.g_max, xi_best, goal_ctx, rng);
    for (const auto& g : goals) {
      try {
        const int id = planners[g.arm].add_goal(g);
        live_goals.push_back({id, g.arm, g.face, g.xi});
      } catch (const PlannerError&) {
        // Marginal IK solutions can fail the planner's re-check; drop them.
      }
    }
    if (should_stop(iteration)) break;

    bool any_live = false;
    for (const auto& p : planners) any_live |= p.live_goal_count() > 0;
    if (any_live) {
      // Round-robin over arms that currently have live goals.
      std::size_t a = rr_arm;
      for (std::size_t k = 0; k < planners.size(); ++k, ++a)
        if (planners[a % planners.size()].live_goal_count() > 0) break;
      a %= planners.size();
      rr_arm = (a + 1) % planners.size();

      const auto result = planners[a].plan(config.m_max, rng);
      if (result) {
        auto rec_it = std::find_if(live_goals.begin(), live_goals.end(),
                                   [&](const GoalRec& r) {
                                     return r.goal_id == result->goal_id &&
                                            r.arm == static_cast<int>(a);
                                   });
        const int face = rec_it != live_goals.end() ? rec_it->face : 0;
        if (rec_it != live_goals.end()) live_goals.erase(rec_it);

        Path path = result->path;
        if (config.local_opt) {
          LocalOptContext lo;
          lo.arm = &arms[a];
          lo.grasp = &(*inputs.grasps)[a];
          lo.objective = &objective;
          lo.field = &prep.field;
          lo.obj = &object;
          lo.regions = &prep.regions;
          lo.face = &prep.faces[face];
          lo.constraints = cp;
          lo.steer = config.steer;
          lo.mu = config.mu;
          lo.max_steps = config.local_opt_max_steps;
          lo.gradient_tolerance = config.gradient_tolerance;
          lo.trans_grad_step =
              config.trans_grad_step > 0 ? config.trans_grad_step : grid.cell_size();
          lo.rot_grad_step = config.rot_grad_step;
          path = optimize_locally(path, lo);
        }

        Solution sol;
        sol.path = std::move(path);
        sol.arm = static_cast<int>(a);
        sol.face = face;
        sol.pose = object_pose(arms[a], (*inputs.grasps)[a], sol.path.waypoints.back());
        sol.xi = objective(sol.pose);
        sol.wall_time = elapsed();
        sol.iteration = iteration;

        xi_best = sol.xi;
        // Goal-set hygiene: drop goals that no longer beat the best value.
        for (auto it = live_goals.begin(); it != live_goals.end();) {
          if (it->xi <= xi_best) {
            planners[it->arm].remove_goal(it->goal_id);
            it = live_goals.erase(it);
          } else {
            ++it;
          }
        }
        best = sol;
        if (publish) publish(*best);
      }
    }
    ++iteration;
  }

  stats_.nodes.clear();
  tree.for_each_node([&](int i) {
    SamplerStats::Node n;
    n.id = i;
    n.parent = tree.parent(i);
    const AfrNode& a = tree.afr(i);
    n.depth = a.depth;
    n.arm = a.arm;
    n.face = a.face;
    n.region = a.region ? a.region->id : -1;
    n.theta_lo = a.theta_lo;
    n.theta_hi = a.theta_hi;
    n.visits = tree.visits(i);
    n.reward = tree.reward(i);
    n.leaf = tree.is_leaf(i);
    stats_.nodes.push_back(n);
  });
  return best;
}

}  // namespace placement
