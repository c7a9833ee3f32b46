// Command-line front end. Everything goes through the shared library's C
// API; this file owns only argument handling and artifact placement.

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "windplan.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPlannerFailure = 1;
constexpr int kExitUsage = 2;

struct OptionsHandle {
  wp_options* o = wp_options_create();
  ~OptionsHandle() { wp_options_destroy(o); }
};
struct ScenarioHandle {
  wp_scenario* s = nullptr;
  ~ScenarioHandle() { wp_scenario_destroy(s); }
};
struct TrajectoryHandle {
  wp_trajectory* t = nullptr;
  ~TrajectoryHandle() { wp_trajectory_destroy(t); }
};
struct ResultHandle {
  wp_plan_result* r = nullptr;
  ~ResultHandle() { wp_plan_result_destroy(r); }
};

int exit_code_for(wp_status s) {
  return (s == WP_ERR_INVALID_ARGUMENT || s == WP_ERR_PARSE)
             ? kExitUsage
             : kExitPlannerFailure;
}

int fail(wp_status s, const std::string& what) {
  std::fprintf(stderr, "error: %s: %s (%s)\n", what.c_str(), wp_last_error(),
               wp_status_name(s));
  return exit_code_for(s);
}

bool apply_sets(wp_options* o, const std::vector<std::string>& sets) {
  for (const std::string& kv : sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n",
                   kv.c_str());
      return false;
    }
    const wp_status s =
        wp_options_set(o, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (s != WP_OK) {
      std::fprintf(stderr, "error: --set %s: %s\n", kv.c_str(),
                   wp_last_error());
      return false;
    }
  }
  return true;
}

void progress_print(int done, int total, double loss, void* user) {
  const char* name = static_cast<const char*>(user);
  const int stride = total >= 20 ? total / 20 : 1;
  if (done % stride == 0 || done == total)
    std::fprintf(stderr, "[%s] %d/%d loss=%.6g\n", name, done, total, loss);
}

bool write_text(const fs::path& path, const char* text) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) return false;
  std::fputs(text, f);
  std::fclose(f);
  return true;
}

/// Runs one planner and writes its artifact set into `out`.
int run_and_save(const wp_scenario* sc, const std::string& planner,
                 uint64_t seed, const wp_options* opts, const fs::path& out,
                 TrajectoryHandle* loaded) {
  ResultHandle res;
  const wp_status s =
      wp_plan(sc, planner.c_str(), seed, opts, progress_print,
              const_cast<char*>(planner.c_str()), &res.r);
  if (s != WP_OK) return fail(s, "planner '" + planner + "'");

  const fs::path traj_path = out / (planner + "_trajectory.csv");
  if (wp_status w =
          wp_trajectory_save_csv(wp_plan_result_trajectory(res.r),
                                 traj_path.string().c_str());
      w != WP_OK)
    return fail(w, "writing " + traj_path.string());
  if (!write_text(out / (planner + "_log.txt"), wp_plan_result_log(res.r))) {
    std::fprintf(stderr, "error: cannot write planner log\n");
    return kExitPlannerFailure;
  }
  if (wp_plan_result_has_train_report(res.r)) {
    const fs::path report = out / "train_report.csv";
    if (wp_status w = wp_plan_result_save_train_report(
            res.r, report.string().c_str());
        w != WP_OK)
      return fail(w, "writing " + report.string());
  }
  if (wp_plan_result_has_checkpoint(res.r)) {
    const fs::path ckpt = out / "pinn_checkpoint.bin";
    if (wp_status w =
            wp_plan_result_save_checkpoint(res.r, ckpt.string().c_str());
        w != WP_OK)
      return fail(w, "writing " + ckpt.string());
  }
  std::printf("%s: wrote %s\n", planner.c_str(), traj_path.string().c_str());
  if (loaded) {
    const wp_status w = wp_trajectory_load_csv(traj_path.string().c_str(),
                                               planner.c_str(), &loaded->t);
    if (w != WP_OK) return fail(w, "reloading " + traj_path.string());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"windplan: UAV trajectory planning in a time-varying wind "
               "field (PINN, wind-aware A*, kinodynamic RRT*)"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::vector<std::string> planners;
  std::vector<std::string> sets;
  std::string out_dir = ".";
  uint64_t seed = 0;
  double wind_time = 0.125;
  std::vector<std::string> csv_paths;

  auto add_common = [&](CLI::App* cmd, bool needs_planner) {
    cmd->add_option("--scenario", scenario_path, "scenario file")->required();
    if (needs_planner)
      cmd->add_option("--planner", planners,
                      "planner name (pinn|astar|kinorrt); repeatable");
    cmd->add_option("--seed", seed, "random seed (default 0)");
    cmd->add_option("--out", out_dir, "output directory (default .)");
    cmd->add_option("--set", sets, "config override key=value; repeatable");
  };

  CLI::App* cmd_plan = app.add_subcommand("plan", "run planners, write CSVs");
  add_common(cmd_plan, true);
  CLI::App* cmd_compare = app.add_subcommand(
      "compare", "run/load >=2 planners, write metrics.csv and comparison.svg");
  add_common(cmd_compare, true);
  CLI::App* cmd_plot =
      app.add_subcommand("plot", "render trajectories.svg from CSVs");
  add_common(cmd_plot, false);
  cmd_plot->add_option("csv", csv_paths, "trajectory CSV files");
  cmd_plot->add_option("--wind-time", wind_time,
                       "wind snapshot time for the quiver [s]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  OptionsHandle opts;
  if (!apply_sets(opts.o, sets)) return kExitUsage;

  ScenarioHandle sc;
  if (wp_status s = wp_scenario_load(scenario_path.c_str(), opts.o, &sc.s);
      s != WP_OK)
    return fail(s, "loading scenario '" + scenario_path + "'");

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const fs::path out{out_dir};

  if (cmd_plan->parsed()) {
    if (planners.empty()) {
      std::fprintf(stderr, "error: plan needs at least one --planner\n");
      return kExitUsage;
    }
    for (const std::string& p : planners)
      if (int rc = run_and_save(sc.s, p, seed, opts.o, out, nullptr); rc != 0)
        return rc;
    return kExitOk;
  }

  if (cmd_compare->parsed()) {
    if (planners.size() < 2) {
      std::fprintf(stderr, "error: compare needs at least two --planner\n");
      return kExitUsage;
    }
    std::vector<std::unique_ptr<TrajectoryHandle>> trajectories;
    for (const std::string& p : planners) {
      auto th = std::make_unique<TrajectoryHandle>();
      const fs::path csv = out / (p + "_trajectory.csv");
      if (fs::exists(csv)) {
        if (wp_status s = wp_trajectory_load_csv(csv.string().c_str(),
                                                 p.c_str(), &th->t);
            s != WP_OK)
          return fail(s, "loading " + csv.string());
        std::printf("%s: using existing %s\n", p.c_str(),
                    csv.string().c_str());
      } else {
        if (int rc = run_and_save(sc.s, p, seed, opts.o, out, th.get());
            rc != 0)
          return rc;
      }
      trajectories.push_back(std::move(th));
    }

    std::vector<wp_metrics> ms(planners.size());
    std::vector<const char*> names;
    std::vector<const wp_trajectory*> views;
    for (std::size_t i = 0; i < planners.size(); ++i) {
      if (wp_status s =
              wp_metrics_compute(trajectories[i]->t, sc.s, &ms[i]);
          s != WP_OK)
        return fail(s, "metrics for " + planners[i]);
      names.push_back(planners[i].c_str());
      views.push_back(trajectories[i]->t);
    }
    const fs::path metrics_csv = out / "metrics.csv";
    if (wp_status s = wp_metrics_save_csv(ms.data(), names.data(), ms.size(),
                                          metrics_csv.string().c_str());
        s != WP_OK)
      return fail(s, "writing " + metrics_csv.string());
    const fs::path svg = out / "comparison.svg";
    if (wp_status s = wp_compare_save_svg(ms.data(), names.data(), ms.size(),
                                          svg.string().c_str());
        s != WP_OK)
      return fail(s, "writing " + svg.string());
    char* table = nullptr;
    if (wp_status s =
            wp_compare_format(ms.data(), names.data(), ms.size(), &table);
        s == WP_OK) {
      std::fputs(table, stdout);
      wp_string_free(table);
    }
    std::printf("wrote %s and %s\n", metrics_csv.string().c_str(),
                svg.string().c_str());
    return kExitOk;
  }

  // plot
  std::vector<std::unique_ptr<TrajectoryHandle>> loaded;
  std::vector<const wp_trajectory*> views;
  for (const std::string& path : csv_paths) {
    auto th = std::make_unique<TrajectoryHandle>();
    std::string tag = fs::path(path).stem().string();
    if (const auto pos = tag.rfind("_trajectory"); pos != std::string::npos)
      tag.erase(pos);
    if (wp_status s = wp_trajectory_load_csv(path.c_str(), tag.c_str(), &th->t);
        s != WP_OK)
      return fail(s, "loading " + path);
    views.push_back(th->t);
    loaded.push_back(std::move(th));
  }
  const fs::path svg = out / "trajectories.svg";
  if (wp_status s = wp_plot_save_svg(sc.s, views.data(), views.size(),
                                     wind_time, svg.string().c_str());
      s != WP_OK)
    return fail(s, "writing " + svg.string());
  std::printf("wrote %s\n", svg.string().c_str());
  return kExitOk;
}
