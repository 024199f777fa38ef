// Command-line front end for the placement planner shared library.
//
// Subcommands:
//   plan       one planning run, streaming a record line per solution
//   benchmark  seeded variant matrix with a normalized-objective report
//   export     triangle-mesh export of a scene (optionally object + path)
//   demo       write the bundled demo assets
//
// Record line format: t_s xi xi_norm arm n_waypoints

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "placement/placement.h"

namespace {

struct ScopedScene {
  ppl_scene* p = nullptr;
  ~ScopedScene() { ppl_scene_free(p); }
};
struct ScopedObject {
  ppl_object* p = nullptr;
  ~ScopedObject() { ppl_object_free(p); }
};
struct ScopedArms {
  ppl_arms* p = nullptr;
  ~ScopedArms() { ppl_arms_free(p); }
};
struct ScopedConfig {
  ppl_config* p = nullptr;
  ~ScopedConfig() { ppl_config_free(p); }
};
struct ScopedSolution {
  ppl_solution* p = nullptr;
  ~ScopedSolution() { ppl_solution_free(p); }
};

[[noreturn]] void die(const std::string& what) {
  std::cerr << "error: " << what;
  const char* detail = ppl_last_error();
  if (detail && *detail) std::cerr << ": " << detail;
  std::cerr << "\n";
  std::exit(1);
}

void check(ppl_status status, const std::string& what) {
  if (status != PPL_OK) die(what + " (" + ppl_status_name(status) + ")");
}

std::string arm_name(const ppl_arms* arms, int index) {
  char buf[128];
  if (ppl_arms_name(arms, index, buf, sizeof(buf)) != PPL_OK) return "arm" + std::to_string(index);
  return buf;
}

std::string config_hash_str(const ppl_config* config) {
  char buf[32];
  check(ppl_config_hash(config, buf, sizeof(buf)), "config hash");
  return buf;
}

struct RunRecord {
  double t = 0.0;  // seconds, or outer iteration in iteration mode
  double xi = 0.0;
  int arm = 0;
  int waypoints = 0;
};

struct RunCapture {
  const ppl_arms* arms = nullptr;
  std::vector<RunRecord> records;
  bool iteration_mode = false;
  // Streaming state (plan subcommand only).
  bool stream = false;
  std::optional<std::pair<double, double>> norm_range;
  double seen_min = std::numeric_limits<double>::infinity();
  double seen_max = -std::numeric_limits<double>::infinity();
};

void on_publish(const ppl_solution* sol, void* user) {
  auto* cap = static_cast<RunCapture*>(user);
  ppl_solution_info info{};
  if (ppl_solution_info_get(sol, &info) != PPL_OK) return;
  RunRecord rec;
  rec.t = cap->iteration_mode ? static_cast<double>(info.iteration) : info.wall_time_s;
  rec.xi = info.xi;
  rec.arm = info.arm;
  rec.waypoints = info.waypoint_count;
  cap->records.push_back(rec);
  if (!cap->stream) return;

  cap->seen_min = std::min(cap->seen_min, info.xi);
  cap->seen_max = std::max(cap->seen_max, info.xi);
  double lo = cap->seen_min, hi = cap->seen_max;
  if (cap->norm_range) {
    lo = cap->norm_range->first;
    hi = cap->norm_range->second;
  }
  const double norm = hi > lo ? (info.xi - lo) / (hi - lo) : 1.0;
  std::printf("%.3f %.8g %.6g %s %d\n", rec.t, rec.xi, norm,
              arm_name(cap->arms, info.arm).c_str(), rec.waypoints);
  std::fflush(stdout);
}

struct CommonArgs {
  std::string scene, object, arms, config;
  std::string objective, sampler, local_opt;
  double time_limit = -1.0;
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool requires_config_inputs) {
  cmd->add_option("--scene", args.scene, "scene file")->required();
  if (requires_config_inputs) {
    cmd->add_option("--object", args.object, "object mesh (.obj with .meta sidecar)")
        ->required();
    cmd->add_option("--arms", args.arms, "arm description file")->required();
    cmd->add_option("--config", args.config, "planner config file");
    cmd->add_option("--objective", args.objective, "max-clearance or min-clearance");
    cmd->add_option("--time-limit", args.time_limit, "seconds");
    cmd->add_option("--seed", args.seed, "rng seed");
    cmd->add_option("--sampler", args.sampler, "mcts or uniform")
        ->check(CLI::IsMember({"mcts", "uniform"}));
    cmd->add_option("--local-opt", args.local_opt, "on or off")
        ->check(CLI::IsMember({"on", "off"}));
  }
}

ppl_config* load_config_arg(const CommonArgs& args) {
  ppl_config* config = nullptr;
  if (!args.config.empty())
    check(ppl_config_load(args.config.c_str(), &config), "loading " + args.config);
  else
    check(ppl_config_default(&config), "creating default config");
  if (!args.objective.empty())
    check(ppl_config_set(config, "objective", args.objective.c_str()), "setting objective");
  if (args.time_limit >= 0)
    check(ppl_config_set(config, "time_limit", std::to_string(args.time_limit).c_str()),
          "setting time limit");
  if (args.seed >= 0)
    check(ppl_config_set(config, "seed", std::to_string(args.seed).c_str()), "setting seed");
  if (!args.sampler.empty())
    check(ppl_config_set(config, "mcts_sampler", args.sampler == "mcts" ? "true" : "false"),
          "setting sampler");
  if (!args.local_opt.empty())
    check(ppl_config_set(config, "local_opt", args.local_opt == "on" ? "true" : "false"),
          "setting local-opt");
  return config;
}

// ---------------------------------------------------------------------------
// plan
// ---------------------------------------------------------------------------

int run_plan(const CommonArgs& args, const std::string& out_path,
             const std::string& export_path, const std::string& diag_path,
             const std::vector<double>& norm_range) {
  ScopedScene scene;
  ScopedObject object;
  ScopedArms arms;
  ScopedConfig config;
  check(ppl_scene_load(args.scene.c_str(), &scene.p), "loading " + args.scene);
  check(ppl_object_load(args.object.c_str(), &object.p), "loading " + args.object);
  check(ppl_arms_load(args.arms.c_str(), &arms.p), "loading " + args.arms);
  config.p = load_config_arg(args);

  char seed_buf[64];
  check(ppl_config_get(config.p, "seed", seed_buf, sizeof(seed_buf)), "reading seed");
  char sampler_buf[16], lo_buf[16];
  ppl_config_get(config.p, "mcts_sampler", sampler_buf, sizeof(sampler_buf));
  ppl_config_get(config.p, "local_opt", lo_buf, sizeof(lo_buf));
  std::printf("# placement_run seed=%s sampler=%s local_opt=%s config=%s\n", seed_buf,
              std::string(sampler_buf) == "true" ? "mcts" : "uniform", lo_buf,
              config_hash_str(config.p).c_str());
  std::fflush(stdout);

  RunCapture cap;
  cap.arms = arms.p;
  cap.stream = true;
  if (norm_range.size() == 2) cap.norm_range = {norm_range[0], norm_range[1]};

  ScopedSolution final_sol;
  const ppl_status status =
      ppl_plan(scene.p, object.p, arms.p, config.p, diag_path.empty() ? nullptr : diag_path.c_str(),
               on_publish, &cap, &final_sol.p);
  if (status == PPL_ERR_PRECONDITION) {
    std::cerr << "no solution possible: " << ppl_last_error() << "\n";
    return 2;
  }
  if (status != PPL_OK && status != PPL_NO_SOLUTION)
    die(std::string("planning failed (") + ppl_status_name(status) + ")");

  if (final_sol.p && !out_path.empty())
    check(ppl_solution_save(final_sol.p, arms.p, out_path.c_str()), "writing " + out_path);
  if (!export_path.empty()) {
    std::string path_file = out_path;
    if (final_sol.p && path_file.empty()) {
      path_file = export_path + ".path";
      check(ppl_solution_save(final_sol.p, arms.p, path_file.c_str()), "writing " + path_file);
    }
    check(ppl_export_scene(scene.p, object.p, arms.p,
                           final_sol.p ? path_file.c_str() : nullptr, export_path.c_str()),
          "writing " + export_path);
  }
  return final_sol.p ? 0 : 2;
}

// ---------------------------------------------------------------------------
// benchmark
// ---------------------------------------------------------------------------

struct BenchRun {
  std::string scene, object, variant;
  int seed = 0;
  bool mcts = true;
  bool local_opt = true;
  bool ok = false;
  std::string error;
  std::vector<RunRecord> records;
};

const std::vector<std::pair<std::string, std::pair<bool, bool>>> kVariants = {
    {"mcts+localopt", {true, true}},
    {"uniform+localopt", {false, true}},
    {"uniform-localopt", {false, false}},
};

int run_benchmark(const CommonArgs& base, const std::vector<std::string>& scenes,
                  const std::vector<std::string>& objects, int seeds, int iters,
                  const std::string& out_path, int jobs) {
  ScopedArms arms;
  check(ppl_arms_load(base.arms.c_str(), &arms.p), "loading " + base.arms);

  std::map<std::string, std::unique_ptr<ScopedScene>> scene_handles;
  std::map<std::string, std::unique_ptr<ScopedObject>> object_handles;
  for (const auto& s : scenes) {
    auto h = std::make_unique<ScopedScene>();
    check(ppl_scene_load(s.c_str(), &h->p), "loading " + s);
    scene_handles.emplace(s, std::move(h));
  }
  for (const auto& o : objects) {
    auto h = std::make_unique<ScopedObject>();
    check(ppl_object_load(o.c_str(), &h->p), "loading " + o);
    object_handles.emplace(o, std::move(h));
  }

  ScopedConfig base_config;
  base_config.p = load_config_arg(base);
  const bool iteration_mode = iters > 0;
  if (iteration_mode) {
    check(ppl_config_set(base_config.p, "max_iterations", std::to_string(iters).c_str()),
          "setting iterations");
    check(ppl_config_set(base_config.p, "time_limit", "1e9"), "setting time limit");
  }

  std::vector<BenchRun> runs;
  for (const auto& s : scenes)
    for (const auto& o : objects)
      for (const auto& v : kVariants)
        for (int seed = 0; seed < seeds; ++seed) {
          BenchRun run;
          run.scene = s;
          run.object = o;
          run.variant = v.first;
          run.seed = seed;
          run.mcts = v.second.first;
          run.local_opt = v.second.second;
          runs.push_back(std::move(run));
        }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= runs.size()) return;
      BenchRun& run = runs[idx];

      ppl_config* config = nullptr;
      ppl_config_clone(base_config.p, &config);
      ppl_config_set(config, "seed", std::to_string(run.seed).c_str());
      ppl_config_set(config, "mcts_sampler", run.mcts ? "true" : "false");
      ppl_config_set(config, "local_opt", run.local_opt ? "true" : "false");

      RunCapture cap;
      cap.arms = arms.p;
      cap.iteration_mode = iteration_mode;
      const ppl_status status =
          ppl_plan(scene_handles.at(run.scene)->p, object_handles.at(run.object)->p, arms.p,
                   config, nullptr, on_publish, &cap, nullptr);
      run.ok = status == PPL_OK || status == PPL_NO_SOLUTION;
      if (!run.ok) run.error = std::string(ppl_status_name(status)) + ": " + ppl_last_error();
      run.records = std::move(cap.records);
      ppl_config_free(config);
    }
  };
  {
    std::vector<std::thread> pool;
    for (int i = 0; i < std::max(1, jobs); ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Normalization follows the evaluation protocol: each scene/object pair's
  // objective values map into the min/max observed across its whole matrix.
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> ranges;
  for (const auto& run : runs) {
    auto& range = ranges.try_emplace({run.scene, run.object},
                                     std::numeric_limits<double>::infinity(),
                                     -std::numeric_limits<double>::infinity())
                      .first->second;
    for (const auto& rec : run.records) {
      range.first = std::min(range.first, rec.xi);
      range.second = std::max(range.second, rec.xi);
    }
  }
  auto normalize = [&](const BenchRun& run, double xi) {
    const auto& range = ranges.at({run.scene, run.object});
    if (range.second > range.first) return (xi - range.first) / (range.second - range.first);
    return std::isfinite(range.first) ? 1.0 : 0.0;
  };

  std::ofstream out(out_path);
  if (!out) die("cannot write " + out_path);
  char time_buf[32];
  ppl_config_get(base_config.p, "time_limit", time_buf, sizeof(time_buf));
  out << "placement_benchmark_report 1\n";
  out << "matrix scenes=" << scenes.size() << " objects=" << objects.size()
      << " variants=" << kVariants.size() << " seeds=" << seeds
      << " mode=" << (iteration_mode ? "iterations" : "time")
      << " budget=" << (iteration_mode ? std::to_string(iters) : std::string(time_buf))
      << " config=" << config_hash_str(base_config.p) << "\n";

  char line[256];
  for (const auto& run : runs) {
    out << "run scene=" << run.scene << " object=" << run.object << " variant=" << run.variant
        << " seed=" << run.seed << " status=" << (run.ok ? "ok" : "failed")
        << " records=" << run.records.size() << "\n";
    if (!run.ok) out << "error " << run.error << "\n";
    for (const auto& rec : run.records) {
      std::snprintf(line, sizeof(line), "rec %.6g %.8g %.6g %s %d\n", rec.t, rec.xi,
                    normalize(run, rec.xi), arm_name(arms.p, rec.arm).c_str(), rec.waypoints);
      out << line;
    }
  }

  for (const auto& s : scenes)
    for (const auto& o : objects)
      for (const auto& v : kVariants) {
        std::vector<double> finals;
        for (const auto& run : runs) {
          if (run.scene != s || run.object != o || run.variant != v.first) continue;
          const double xi_norm =
              run.records.empty() ? 0.0 : normalize(run, run.records.back().xi);
          std::snprintf(line, sizeof(line),
                        "final scene=%s object=%s variant=%s seed=%d solutions=%zu "
                        "xi=%.8g xi_norm=%.6g\n",
                        s.c_str(), o.c_str(), v.first.c_str(), run.seed, run.records.size(),
                        run.records.empty() ? 0.0 : run.records.back().xi, xi_norm);
          out << line;
          finals.push_back(xi_norm);
        }

        // Mean normalized best-so-far objective on a fixed budget grid; runs
        // without a solution yet contribute 0.
        const int grid_n = 20;
        const double budget = iteration_mode ? iters : std::stod(time_buf);
        out << "curve scene=" << s << " object=" << o << " variant=" << v.first
            << " n=" << grid_n << "\n";
        for (int gp = 1; gp <= grid_n; ++gp) {
          const double t = budget * gp / grid_n;
          double sum = 0.0;
          int count = 0;
          for (const auto& run : runs) {
            if (run.scene != s || run.object != o || run.variant != v.first) continue;
            double best = 0.0;
            for (const auto& rec : run.records)
              if (rec.t <= t + 1e-9) best = normalize(run, rec.xi);
            sum += best;
            ++count;
          }
          std::snprintf(line, sizeof(line), "pt %.6g %.6g\n", t, count ? sum / count : 0.0);
          out << line;
        }

        std::sort(finals.begin(), finals.end());
        const double median =
            finals.empty() ? 0.0
                           : (finals.size() % 2 ? finals[finals.size() / 2]
                                                : 0.5 * (finals[finals.size() / 2 - 1] +
                                                         finals[finals.size() / 2]));
        std::snprintf(line, sizeof(line), "median scene=%s object=%s variant=%s value=%.6g\n",
                      s.c_str(), o.c_str(), v.first.c_str(), median);
        out << line;
      }
  std::cout << "report written to " << out_path << " (" << runs.size() << " runs)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// export / demo
// ---------------------------------------------------------------------------

int run_export(const std::string& scene_path, const std::string& object_path,
               const std::string& arms_path, const std::string& path_file,
               const std::string& out_path) {
  ScopedScene scene;
  ScopedObject object;
  ScopedArms arms;
  check(ppl_scene_load(scene_path.c_str(), &scene.p), "loading " + scene_path);
  if (!object_path.empty())
    check(ppl_object_load(object_path.c_str(), &object.p), "loading " + object_path);
  if (!arms_path.empty())
    check(ppl_arms_load(arms_path.c_str(), &arms.p), "loading " + arms_path);
  check(ppl_export_scene(scene.p, object.p, arms.p,
                         path_file.empty() ? nullptr : path_file.c_str(), out_path.c_str()),
        "writing " + out_path);
  std::cout << "mesh written to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anytime placement planner"};
  app.require_subcommand(1);

  CommonArgs plan_args;
  std::string out_path, export_path, diag_path;
  std::vector<double> norm_range;
  auto* plan = app.add_subcommand("plan", "run the planner once");
  add_common(plan, plan_args, true);
  plan->add_option("--out", out_path, "write the final path file here");
  plan->add_option("--export", export_path, "write a mesh export of the result");
  plan->add_option("--diag", diag_path, "write sampler-tree statistics");
  plan->add_option("--norm-range", norm_range, "fixed lo hi for xi_norm")->expected(2);

  CommonArgs bench_args;
  std::vector<std::string> bench_scenes, bench_objects;
  int bench_seeds = 5, bench_iters = 0, bench_jobs = 1;
  std::string bench_out = "benchmark_report.txt";
  auto* bench = app.add_subcommand("benchmark", "run the seeded variant matrix");
  bench->add_option("--scene", bench_scenes, "scene file(s)")->required();
  bench->add_option("--object", bench_objects, "object mesh(es)")->required();
  bench->add_option("--arms", bench_args.arms, "arm description file")->required();
  bench->add_option("--config", bench_args.config, "planner config file");
  bench->add_option("--objective", bench_args.objective, "objective name");
  bench->add_option("--time-limit", bench_args.time_limit, "seconds per run");
  bench->add_option("--iters", bench_iters,
                    "outer iterations per run (deterministic mode, overrides time)");
  bench->add_option("--seeds", bench_seeds, "seeds per variant");
  bench->add_option("--jobs", bench_jobs, "parallel worker slots");
  bench->add_option("--out", bench_out, "report file");

  std::string exp_scene, exp_object, exp_arms, exp_path, exp_out;
  auto* exp = app.add_subcommand("export", "export scene geometry as a mesh");
  exp->add_option("--scene", exp_scene, "scene file")->required();
  exp->add_option("--object", exp_object, "object mesh");
  exp->add_option("--arms", exp_arms, "arm description file");
  exp->add_option("--path", exp_path, "solution path file");
  exp->add_option("--out", exp_out, "output OBJ file")->required();

  std::string demo_dir = ".";
  auto* demo = app.add_subcommand("demo", "write the bundled demo assets");
  demo->add_option("--out", demo_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan) return run_plan(plan_args, out_path, export_path, diag_path, norm_range);
    if (*bench)
      return run_benchmark(bench_args, bench_scenes, bench_objects, bench_seeds, bench_iters,
                           bench_out, bench_jobs);
    if (*exp) return run_export(exp_scene, exp_object, exp_arms, exp_path, exp_out);
    if (*demo) {
      check(ppl_write_demo_assets(demo_dir.c_str()), "writing demo assets");
      std::cout << "demo assets written to " << demo_dir << "\n";
      return 0;
    }
  } catch (const std::exception& err) {
    die(err.what());
  }
  return 1;
}
