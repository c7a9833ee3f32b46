#include "windplan.h"

#include <cstring>
#include <exception>
#include <memory>
#include <string>
#include <vector>

#include "core/csv_io.hpp"
#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/mlp.hpp"
#include "core/options.hpp"
#include "core/plan_runner.hpp"
#include "core/scenario_io.hpp"
#include "core/svg_plot.hpp"

using namespace windplan;

extern "C" {

struct wp_options {
  Options opts;
};
struct wp_scenario {
  Scenario sc;
};
struct wp_trajectory {
  TrajectoryRecord tr;
};
struct wp_plan_result {
  PlanResult res;
  wp_trajectory traj_view;
};

}  // extern "C"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

wp_status status_of(const std::exception& e) {
  set_error(e.what());
  if (dynamic_cast<const ParseError*>(&e)) return WP_ERR_PARSE;
  if (dynamic_cast<const ConfigError*>(&e)) return WP_ERR_INVALID_ARGUMENT;
  if (dynamic_cast<const PlannerError*>(&e)) return WP_ERR_PLANNER;
  if (dynamic_cast<const IoError*>(&e)) return WP_ERR_IO;
  return WP_ERR_INTERNAL;
}

template <class Fn>
wp_status guarded(Fn&& fn) {
  try {
    fn();
    return WP_OK;
  } catch (const std::exception& e) {
    return status_of(e);
  } catch (...) {
    set_error("unknown error");
    return WP_ERR_INTERNAL;
  }
}

wp_status require(bool cond, const char* msg) {
  if (cond) return WP_OK;
  set_error(msg);
  return WP_ERR_INVALID_ARGUMENT;
}

std::vector<metrics::MetricsReport> reports_of(const wp_metrics* list,
                                               const char* const* names,
                                               size_t n) {
  std::vector<metrics::MetricsReport> reports(n);
  for (size_t i = 0; i < n; ++i) {
    reports[i].planner = names[i];
    reports[i].e_ctrl = list[i].e_ctrl;
    reports[i].s_ctrl = list[i].s_ctrl;
    reports[i].l_path = list[i].l_path;
    reports[i].t_flight = list[i].t_flight;
    reports[i].d_min = list[i].d_min;
  }
  return reports;
}

}  // namespace

extern "C" {

const char* wp_status_name(wp_status s) {
  switch (s) {
    case WP_OK: return "ok";
    case WP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case WP_ERR_PARSE: return "parse error";
    case WP_ERR_IO: return "io error";
    case WP_ERR_PLANNER: return "planner failure";
    case WP_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* wp_last_error(void) { return g_last_error.c_str(); }

const char* wp_version(void) { return "windplan 1.0.0"; }

wp_options* wp_options_create(void) { return new wp_options; }

void wp_options_destroy(wp_options* o) { delete o; }

wp_status wp_options_set(wp_options* o, const char* key, const char* value) {
  if (wp_status s = require(o && key && value, "null argument")) return s;
  return guarded([&] { o->opts.set(key, value); });
}

wp_status wp_scenario_load(const char* path, const wp_options* overrides,
                           wp_scenario** out) {
  if (wp_status s = require(path && out, "null argument")) return s;
  return guarded([&] {
    static const Options kEmpty;
    auto sc = std::make_unique<wp_scenario>();
    sc->sc = io::load_scenario(path, overrides ? overrides->opts : kEmpty);
    *out = sc.release();
  });
}

wp_status wp_scenario_parse(const char* text, const wp_options* overrides,
                            wp_scenario** out) {
  if (wp_status s = require(text && out, "null argument")) return s;
  return guarded([&] {
    static const Options kEmpty;
    auto sc = std::make_unique<wp_scenario>();
    sc->sc = io::parse_scenario(text, overrides ? overrides->opts : kEmpty);
    *out = sc.release();
  });
}

void wp_scenario_destroy(wp_scenario* s) { delete s; }

size_t wp_scenario_obstacle_count(const wp_scenario* s) {
  return s ? s->sc.obstacles.size() : 0;
}

const char* wp_scenario_name(const wp_scenario* s) {
  return s ? s->sc.name.c_str() : "";
}

void wp_trajectory_destroy(wp_trajectory* t) { delete t; }

size_t wp_trajectory_samples(const wp_trajectory* t) {
  return t ? t->tr.size() : 0;
}

wp_status wp_trajectory_column(const wp_trajectory* t, int column, double* buf,
                               size_t buflen) {
  if (wp_status s = require(t && buf, "null argument")) return s;
  if (wp_status s = require(column >= 0 && column <= 6,
                            "column must be in 0..6"))
    return s;
  if (wp_status s = require(buflen >= t->tr.size(), "buffer too small"))
    return s;
  const std::vector<double>* cols[7] = {&t->tr.t,  &t->tr.x,  &t->tr.y,
                                        &t->tr.vx, &t->tr.vy, &t->tr.ux,
                                        &t->tr.uy};
  std::memcpy(buf, cols[column]->data(), t->tr.size() * sizeof(double));
  return WP_OK;
}

wp_status wp_trajectory_save_csv(const wp_trajectory* t, const char* path) {
  if (wp_status s = require(t && path, "null argument")) return s;
  return guarded([&] { io::write_trajectory_csv(path, t->tr); });
}

wp_status wp_trajectory_load_csv(const char* path, const char* planner_tag,
                                 wp_trajectory** out) {
  if (wp_status s = require(path && out, "null argument")) return s;
  return guarded([&] {
    auto t = std::make_unique<wp_trajectory>();
    t->tr = io::read_trajectory_csv(path);
    if (planner_tag) t->tr.planner = planner_tag;
    *out = t.release();
  });
}

wp_status wp_plan(const wp_scenario* s, const char* planner, uint64_t seed,
                  const wp_options* overrides, wp_progress_fn progress,
                  void* user, wp_plan_result** out) {
  if (wp_status st = require(s && planner && out, "null argument")) return st;
  return guarded([&] {
    static const Options kEmpty;
    ProgressFn cb;
    if (progress)
      cb = [progress, user](int done, int total, double loss) {
        progress(done, total, loss, user);
      };
    auto r = std::make_unique<wp_plan_result>();
    r->res = run_planner(s->sc, planner, seed,
                         overrides ? overrides->opts : kEmpty, cb);
    r->traj_view.tr = r->res.trajectory;
    *out = r.release();
  });
}

void wp_plan_result_destroy(wp_plan_result* r) { delete r; }

const wp_trajectory* wp_plan_result_trajectory(const wp_plan_result* r) {
  return r ? &r->traj_view : nullptr;
}

const char* wp_plan_result_log(const wp_plan_result* r) {
  return r ? r->res.log.c_str() : "";
}

int wp_plan_result_has_train_report(const wp_plan_result* r) {
  return r && r->res.train_report ? 1 : 0;
}

wp_status wp_plan_result_save_train_report(const wp_plan_result* r,
                                           const char* csv_path) {
  if (wp_status s = require(r && csv_path, "null argument")) return s;
  if (wp_status s = require(r->res.train_report.has_value(),
                            "planner produced no train report"))
    return s;
  return guarded(
      [&] { io::write_train_report_csv(csv_path, *r->res.train_report); });
}

int wp_plan_result_has_checkpoint(const wp_plan_result* r) {
  return r && r->res.net ? 1 : 0;
}

wp_status wp_plan_result_save_checkpoint(const wp_plan_result* r,
                                         const char* path) {
  if (wp_status s = require(r && path, "null argument")) return s;
  if (wp_status s =
          require(r->res.net.has_value(), "planner produced no checkpoint"))
    return s;
  return guarded([&] {
    diff::save_checkpoint(path, r->res.net->first, r->res.net->second);
  });
}

wp_status wp_metrics_compute(const wp_trajectory* t, const wp_scenario* s,
                             wp_metrics* out) {
  if (wp_status st = require(t && s && out, "null argument")) return st;
  return guarded([&] {
    const metrics::MetricsReport r = metrics::compute_all(t->tr, s->sc);
    *out = {r.e_ctrl, r.s_ctrl, r.l_path, r.t_flight, r.d_min};
  });
}

wp_status wp_metrics_save_csv(const wp_metrics* list, const char* const* names,
                              size_t n, const char* path) {
  if (wp_status s = require(list && names && path && n > 0, "null argument"))
    return s;
  return guarded(
      [&] { io::write_metrics_csv(path, reports_of(list, names, n)); });
}

wp_status wp_compare_format(const wp_metrics* list, const char* const* names,
                            size_t n, char** out) {
  if (wp_status s = require(list && names && out && n > 0, "null argument"))
    return s;
  return guarded([&] {
    const auto cmp = metrics::compare(reports_of(list, names, n));
    const std::string text = metrics::format_table(cmp);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

wp_status wp_compare_save_svg(const wp_metrics* list, const char* const* names,
                              size_t n, const char* path) {
  if (wp_status s = require(list && names && path && n > 0, "null argument"))
    return s;
  return guarded([&] {
    const auto cmp = metrics::compare(reports_of(list, names, n));
    io::write_file(path, plot::comparison_svg(cmp));
  });
}

wp_status wp_plot_save_svg(const wp_scenario* s,
                           const wp_trajectory* const* trajectories, size_t n,
                           double wind_time, const char* path) {
  if (wp_status st = require(s && path && (n == 0 || trajectories),
                             "null argument"))
    return st;
  return guarded([&] {
    std::vector<TrajectoryRecord> trs;
    trs.reserve(n);
    for (size_t i = 0; i < n; ++i) trs.push_back(trajectories[i]->tr);
    io::write_file(path, plot::trajectories_svg(s->sc, trs, wind_time));
  });
}

void wp_string_free(char* s) { delete[] s; }

}  // extern "C"
