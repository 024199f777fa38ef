/* C API for the placement planner shared library.
 *
 * All objects are opaque handles created by ppl_*_load / ppl_*_default and
 * released with the matching ppl_*_free. Functions return PPL_OK on success;
 * on failure ppl_last_error() describes the problem for the calling thread.
 */
#ifndef PLACEMENT_PLACEMENT_H
#define PLACEMENT_PLACEMENT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ppl_status {
  PPL_OK = 0,
  PPL_ERR_IO = 1,           /* file missing or unreadable */
  PPL_ERR_PARSE = 2,        /* malformed input file */
  PPL_ERR_INVALID_ARGUMENT = 3,
  PPL_ERR_PRECONDITION = 4, /* unplaceable object, empty volume, bad start */
  PPL_NO_SOLUTION = 5,      /* planner finished without a solution */
  PPL_ERR_UNKNOWN = 6,
} ppl_status;

typedef struct ppl_scene ppl_scene;
typedef struct ppl_object ppl_object;
typedef struct ppl_arms ppl_arms;
typedef struct ppl_config ppl_config;
typedef struct ppl_solution ppl_solution;

const char* ppl_status_name(ppl_status status);
/* Message of the most recent failure on this thread; empty when none. */
const char* ppl_last_error(void);

/* --- inputs ------------------------------------------------------------ */

ppl_status ppl_scene_load(const char* path, ppl_scene** out);
void ppl_scene_free(ppl_scene* scene);

/* Loads an OBJ mesh plus its .meta sidecar (same stem). */
ppl_status ppl_object_load(const char* mesh_path, ppl_object** out);
void ppl_object_free(ppl_object* object);

ppl_status ppl_arms_load(const char* path, ppl_arms** out);
void ppl_arms_free(ppl_arms* arms);
int ppl_arms_count(const ppl_arms* arms);
ppl_status ppl_arms_name(const ppl_arms* arms, int index, char* buf, size_t buflen);

ppl_status ppl_config_default(ppl_config** out);
ppl_status ppl_config_load(const char* path, ppl_config** out);
ppl_status ppl_config_clone(const ppl_config* config, ppl_config** out);
void ppl_config_free(ppl_config* config);
/* Sets one field by its config-file key, e.g. "seed", "objective",
 * "time_limit", "mcts_sampler", "local_opt". */
ppl_status ppl_config_set(ppl_config* config, const char* key, const char* value);
ppl_status ppl_config_get(const ppl_config* config, const char* key, char* buf, size_t buflen);
/* 16-hex-digit hash of the full configuration. */
ppl_status ppl_config_hash(const ppl_config* config, char* buf, size_t buflen);

/* --- planning ----------------------------------------------------------- */

typedef struct ppl_solution_info {
  double wall_time_s;  /* since ppl_plan started */
  double xi;           /* objective value of the placement pose */
  int iteration;       /* outer planner iteration */
  int arm;
  int waypoint_count;
  int dof;
} ppl_solution_info;

/* Called for every published (strictly improving) solution. The solution
 * handle is only valid during the call; use ppl_solution_clone to keep it. */
typedef void (*ppl_publish_fn)(const ppl_solution* solution, void* user);

/* Runs the anytime planner. Returns PPL_OK with the final solution in
 * *final_out (caller frees), or PPL_NO_SOLUTION when the time budget expired
 * without one. final_out may be NULL. diag_path, when non-NULL, receives the
 * sampler-tree statistics after the run. */
ppl_status ppl_plan(const ppl_scene* scene, const ppl_object* object, const ppl_arms* arms,
                    const ppl_config* config, const char* diag_path, ppl_publish_fn publish,
                    void* user, ppl_solution** final_out);

ppl_status ppl_solution_info_get(const ppl_solution* solution, ppl_solution_info* info);
ppl_status ppl_solution_waypoint(const ppl_solution* solution, int index, double* q,
                                 int capacity);
/* Placement pose as x y z qw qx qy qz. */
ppl_status ppl_solution_pose(const ppl_solution* solution, double out[7]);
ppl_status ppl_solution_clone(const ppl_solution* solution, ppl_solution** out);
ppl_status ppl_solution_save(const ppl_solution* solution, const ppl_arms* arms,
                             const char* path);
void ppl_solution_free(ppl_solution* solution);

/* --- tools -------------------------------------------------------------- */

/* Triangle-mesh export of the environment, optionally with the object at a
 * saved solution pose and the arm ball approximations along the path.
 * object/arms/path_file may each be NULL. */
ppl_status ppl_export_scene(const ppl_scene* scene, const ppl_object* object,
                            const ppl_arms* arms, const char* path_file,
                            const char* out_obj_path);

/* Writes the bundled demo scenes, objects, arm rigs and default config. */
ppl_status ppl_write_demo_assets(const char* dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PLACEMENT_PLACEMENT_H */
