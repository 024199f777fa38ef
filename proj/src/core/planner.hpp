#pragma once

#include <atomic>
#include <functional>

#include "core/motion_planner.hpp"

namespace placement {

struct PlannerConfig {
  std::uint64_t seed = 0;
  double time_limit = 30.0;  // s; 0 means no planning at all
  int max_iterations = 0;    // outer loop iterations; 0 means unbounded

  int g_max = 50;
  int m_max = 400;
  double exploration_c = M_SQRT1_2;
  HierarchyParams hierarchy;
  ConstraintParams constraints;  // unresolved; zeros become cell-size defaults
  SteerParams steer;
  IkParams ik;
  int ik_seeds = 10;

  std::string objective = "max-clearance";
  bool mcts_sampler = true;
  bool local_opt = true;
  double mu = 0.02;            // local optimization step size
  int local_opt_max_steps = 100;
  double gradient_tolerance = 1e-5;
  double trans_grad_step = 0.0;  // <= 0 resolves to one cell size
  double rot_grad_step = 0.05;   // rad
  double stability_margin = 1e-4;  // placement-face COM margin, m
};

struct Solution {
  Path path;
  Pose pose;  // grasped-object pose at the final waypoint
  double xi = 0.0;
  double wall_time = 0.0;  // s since run() started
  int iteration = 0;       // outer loop iteration that produced it
  int arm = 0;
  int face = 0;
};

struct PlannerInputs {
  const VoxelGrid* grid = nullptr;
  TargetVolume volume;
  const ObjectModel* object = nullptr;
  const std::vector<ArmModel>* arms = nullptr;
  const std::vector<Grasp>* grasps = nullptr;   // one per arm
  std::vector<Eigen::VectorXd> start_configs;   // one per arm
};

struct PreprocessResult {
  std::vector<PlacementFace> faces;
  std::vector<RegionPtr> regions;
  DistanceField field;
  double object_clearance_height = 0.0;
};

/// Extracts placement faces, the distance field, and support regions. The
/// region clearance height is the smallest object height over the placement
/// faces, so no feasible orientation is excluded.
PreprocessResult preprocess(const VoxelGrid& grid, const TargetVolume& volume,
                            const ObjectModel& object, double stability_margin = 1e-4);

struct LocalOptContext {
  const ArmModel* arm = nullptr;
  const Grasp* grasp = nullptr;
  const Objective* objective = nullptr;
  const DistanceField* field = nullptr;
  const ObjectModel* obj = nullptr;
  const std::vector<RegionPtr>* regions = nullptr;
  const PlacementFace* face = nullptr;
  ConstraintParams constraints;  // resolved
  SteerParams steer;
  double mu = 0.02;
  int max_steps = 100;
  double gradient_tolerance = 1e-5;
  double trans_grad_step = 0.01;
  double rot_grad_step = 0.05;
};

/// Greedy objective ascent on the final configuration: steps follow the
/// Jacobian pseudo-inverse of the lifted (x, y, e_z) gradient, accepted
/// steps are appended as waypoints, and any constraint violation stops the
/// ascent (with a single mu backtrack). The input path is never shortened.
Path optimize_locally(const Path& path, const LocalOptContext& ctx);

using PublishCallback = std::function<void(const Solution&)>;

struct SamplerStats {
  struct Node {
    int id = -1, parent = -1, depth = 0, arm = -1, face = -1, region = -1;
    double theta_lo = 0, theta_hi = 0;
    std::uint64_t visits = 0;
    double reward = 0;
    bool leaf = false;
  };
  std::vector<Node> nodes;
};

/// Algorithm 1: interleaves goal sampling, motion planning and local
/// optimization until the time limit, iteration cap or stop flag, publishing
/// strictly improving solutions through the callback. Returns the final
/// solution, or nullopt when none was found. Throws precondition_failed when
/// there are no placement faces, no regions, or an invalid start config.
class AnytimePlanner {
 public:
  std::optional<Solution> run(const PlannerConfig& config, const PlannerInputs& inputs,
                              const PublishCallback& publish = nullptr,
                              const std::atomic<bool>* stop = nullptr);

  /// Visit/reward counters of the sampler tree after the last run.
  const SamplerStats& sampler_stats() const { return stats_; }

 private:
  SamplerStats stats_;
};

}  // namespace placement
