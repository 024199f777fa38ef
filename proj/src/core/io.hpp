#pragma once

#include <iosfwd>
#include <string>

#include "core/planner.hpp"

namespace placement {

// Line-oriented structured text formats, all versioned by their first line.
// Parse errors carry file and line diagnostics.

Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

/// Mesh file is a Wavefront OBJ subset (v/f triangles); object metadata
/// (center of mass, body points or their sampling resolution) lives in a
/// sidecar file with the same stem and a .meta extension.
ObjectModel load_object(const std::string& mesh_path);
void save_object(const ObjectModel& obj, const std::string& mesh_path);

struct ArmSet {
  std::vector<ArmModel> arms;
  std::vector<Grasp> grasps;
  std::vector<Eigen::VectorXd> start_configs;
};

ArmSet load_arms(const std::string& path);
void save_arms(const ArmSet& arms, const std::string& path);

PlannerConfig load_config(const std::string& path);
void save_config(const PlannerConfig& config, const std::string& path);
std::string serialize_config(const PlannerConfig& config);
/// Applies a single `key value` override; throws parse_error on unknown keys.
void apply_config_override(PlannerConfig& config, const std::string& key,
                           const std::string& value);
/// FNV-1a hash of the canonical serialization, 16 hex digits.
std::string config_hash(const PlannerConfig& config);

struct SolutionFile {
  int arm = 0;
  std::string arm_name;
  double xi = 0.0;
  Pose pose;
  std::vector<Eigen::VectorXd> waypoints;
};

void save_solution(const Solution& solution, const ArmSet& arms, const std::string& path);
SolutionFile load_solution(const std::string& path);

/// Triangle-mesh export (OBJ) of the occupied voxels, plus optionally the
/// object at the solution pose and the arm collision balls along the path.
void export_scene_obj(const Scene& scene, const ObjectModel* obj, const ArmSet* arms,
                      const SolutionFile* solution, const std::string& out_path);

void save_sampler_stats(const SamplerStats& stats, const std::string& path);

/// Interior points of a watertight triangle mesh on a regular lattice at the
/// given spacing (parity ray casting along +z).
std::vector<Vec3> generate_body_points(const std::vector<Vec3>& vertices,
                                       const std::vector<Eigen::Vector3i>& triangles,
                                       double resolution);

}  // namespace placement
