#include "placement/placement.h"

#include <cstring>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "core/demo_assets.hpp"
#include "core/io.hpp"

using namespace placement;

struct ppl_scene {
  Scene scene;
};
struct ppl_object {
  ObjectModel object;
};
struct ppl_arms {
  ArmSet set;
};
struct ppl_config {
  PlannerConfig config;
};
struct ppl_solution {
  Solution solution;
};

namespace {

thread_local std::string g_last_error;

ppl_status fail(ppl_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

ppl_status from_error(const PlannerError& err) {
  switch (err.code()) {
    case ErrorCode::io_error:
      return fail(PPL_ERR_IO, err.what());
    case ErrorCode::parse_error:
      return fail(PPL_ERR_PARSE, err.what());
    case ErrorCode::precondition_failed:
    case ErrorCode::no_stable_face:
    case ErrorCode::volume_outside_grid:
      return fail(PPL_ERR_PRECONDITION, err.what());
    default:
      return fail(PPL_ERR_UNKNOWN, err.what());
  }
}

template <typename Fn>
ppl_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const PlannerError& err) {
    return from_error(err);
  } catch (const std::exception& err) {
    return fail(PPL_ERR_UNKNOWN, err.what());
  }
}

ppl_status copy_string(const std::string& s, char* buf, size_t buflen) {
  if (!buf || buflen == 0) return fail(PPL_ERR_INVALID_ARGUMENT, "null output buffer");
  if (s.size() + 1 > buflen) return fail(PPL_ERR_INVALID_ARGUMENT, "output buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return PPL_OK;
}

}  // namespace

extern "C" {

const char* ppl_status_name(ppl_status status) {
  switch (status) {
    case PPL_OK: return "ok";
    case PPL_ERR_IO: return "io_error";
    case PPL_ERR_PARSE: return "parse_error";
    case PPL_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case PPL_ERR_PRECONDITION: return "precondition_failed";
    case PPL_NO_SOLUTION: return "no_solution";
    case PPL_ERR_UNKNOWN: return "unknown";
  }
  return "unknown";
}

const char* ppl_last_error(void) { return g_last_error.c_str(); }

ppl_status ppl_scene_load(const char* path, ppl_scene** out) {
  if (!path || !out) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<ppl_scene>();
    handle->scene = load_scene(path);
    *out = handle.release();
    return PPL_OK;
  });
}

void ppl_scene_free(ppl_scene* scene) { delete scene; }

ppl_status ppl_object_load(const char* mesh_path, ppl_object** out) {
  if (!mesh_path || !out) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<ppl_object>();
    handle->object = load_object(mesh_path);
    *out = handle.release();
    return PPL_OK;
  });
}

void ppl_object_free(ppl_object* object) { delete object; }

ppl_status ppl_arms_load(const char* path, ppl_arms** out) {
  if (!path || !out) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<ppl_arms>();
    handle->set = load_arms(path);
    *out = handle.release();
    return PPL_OK;
  });
}

void ppl_arms_free(ppl_arms* arms) { delete arms; }

int ppl_arms_count(const ppl_arms* arms) {
  return arms ? static_cast<int>(arms->set.arms.size()) : 0;
}

ppl_status ppl_arms_name(const ppl_arms* arms, int index, char* buf, size_t buflen) {
  if (!arms || index < 0 || index >= ppl_arms_count(arms))
    return fail(PPL_ERR_INVALID_ARGUMENT, "arm index out of range");
  return copy_string(arms->set.arms[index].name, buf, buflen);
}

ppl_status ppl_config_default(ppl_config** out) {
  if (!out) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  *out = new ppl_config{};
  return PPL_OK;
}

ppl_status ppl_config_load(const char* path, ppl_config** out) {
  if (!path || !out) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<ppl_config>();
    handle->config = load_config(path);
    *out = handle.release();
    return PPL_OK;
  });
}

ppl_status ppl_config_clone(const ppl_config* config, ppl_config** out) {
  if (!config || !out) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  *out = new ppl_config{config->config};
  return PPL_OK;
}

void ppl_config_free(ppl_config* config) { delete config; }

ppl_status ppl_config_set(ppl_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    apply_config_override(config->config, key, value);
    return PPL_OK;
  });
}

ppl_status ppl_config_get(const ppl_config* config, const char* key, char* buf, size_t buflen) {
  if (!config || !key) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::string canon = serialize_config(config->config);
    std::istringstream in(canon);
    std::string line;
    while (std::getline(in, line)) {
      const auto space = line.find(' ');
      if (space != std::string::npos && line.substr(0, space) == key)
        return copy_string(line.substr(space + 1), buf, buflen);
    }
    return fail(PPL_ERR_INVALID_ARGUMENT, std::string("unknown config key ") + key);
  });
}

ppl_status ppl_config_hash(const ppl_config* config, char* buf, size_t buflen) {
  if (!config) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  return copy_string(config_hash(config->config), buf, buflen);
}

ppl_status ppl_plan(const ppl_scene* scene, const ppl_object* object, const ppl_arms* arms,
                    const ppl_config* config, const char* diag_path, ppl_publish_fn publish,
                    void* user, ppl_solution** final_out) {
  if (final_out) *final_out = nullptr;
  if (!scene || !object || !arms || !config)
    return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> ppl_status {
    PlannerInputs inputs;
    inputs.grid = &scene->scene.grid;
    inputs.volume = scene->scene.volume;
    inputs.object = &object->object;
    inputs.arms = &arms->set.arms;
    inputs.grasps = &arms->set.grasps;
    inputs.start_configs = arms->set.start_configs;

    PublishCallback cb;
    if (publish) {
      cb = [&](const Solution& sol) {
        ppl_solution view{sol};
        publish(&view, user);
      };
    }
    AnytimePlanner planner;
    const auto result = planner.run(config->config, inputs, cb);
    if (diag_path) save_sampler_stats(planner.sampler_stats(), diag_path);
    if (!result) return fail(PPL_NO_SOLUTION, "planner finished without a solution");
    if (final_out) *final_out = new ppl_solution{*result};
    return PPL_OK;
  });
}

ppl_status ppl_solution_info_get(const ppl_solution* solution, ppl_solution_info* info) {
  if (!solution || !info) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  info->wall_time_s = solution->solution.wall_time;
  info->xi = solution->solution.xi;
  info->iteration = solution->solution.iteration;
  info->arm = solution->solution.arm;
  info->waypoint_count = static_cast<int>(solution->solution.path.waypoints.size());
  info->dof = solution->solution.path.waypoints.empty()
                  ? 0
                  : static_cast<int>(solution->solution.path.waypoints.front().size());
  return PPL_OK;
}

ppl_status ppl_solution_waypoint(const ppl_solution* solution, int index, double* q,
                                 int capacity) {
  if (!solution || !q) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  const auto& wps = solution->solution.path.waypoints;
  if (index < 0 || index >= static_cast<int>(wps.size()))
    return fail(PPL_ERR_INVALID_ARGUMENT, "waypoint index out of range");
  if (capacity < wps[index].size())
    return fail(PPL_ERR_INVALID_ARGUMENT, "waypoint buffer too small");
  for (int i = 0; i < wps[index].size(); ++i) q[i] = wps[index][i];
  return PPL_OK;
}

ppl_status ppl_solution_pose(const ppl_solution* solution, double out[7]) {
  if (!solution || !out) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  const Pose& p = solution->solution.pose;
  out[0] = p.position.x();
  out[1] = p.position.y();
  out[2] = p.position.z();
  out[3] = p.orientation.w();
  out[4] = p.orientation.x();
  out[5] = p.orientation.y();
  out[6] = p.orientation.z();
  return PPL_OK;
}

ppl_status ppl_solution_clone(const ppl_solution* solution, ppl_solution** out) {
  if (!solution || !out) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  *out = new ppl_solution{solution->solution};
  return PPL_OK;
}

ppl_status ppl_solution_save(const ppl_solution* solution, const ppl_arms* arms,
                             const char* path) {
  if (!solution || !arms || !path) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    save_solution(solution->solution, arms->set, path);
    return PPL_OK;
  });
}

void ppl_solution_free(ppl_solution* solution) { delete solution; }

ppl_status ppl_export_scene(const ppl_scene* scene, const ppl_object* object,
                            const ppl_arms* arms, const char* path_file,
                            const char* out_obj_path) {
  if (!scene || !out_obj_path) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::optional<SolutionFile> sol;
    if (path_file) sol = load_solution(path_file);
    export_scene_obj(scene->scene, object ? &object->object : nullptr,
                     arms ? &arms->set : nullptr, sol ? &*sol : nullptr, out_obj_path);
    return PPL_OK;
  });
}

ppl_status ppl_write_demo_assets(const char* dir) {
  if (!dir) return fail(PPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    write_demo_assets(dir);
    return PPL_OK;
  });
}

}  // extern "C"
