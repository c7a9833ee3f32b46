/* windplan: planar UAV trajectory planning under time-varying wind.
 *
 * C API of the shared library. All objects are opaque handles created and
 * destroyed here; every fallible call returns a wp_status and leaves a
 * human-readable message in wp_last_error() (thread-local) on failure.
 */
#ifndef WINDPLAN_H
#define WINDPLAN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wp_status {
  WP_OK = 0,
  WP_ERR_INVALID_ARGUMENT = 1, /* bad arguments, unknown names, bad config */
  WP_ERR_PARSE = 2,            /* malformed scenario/CSV/checkpoint input */
  WP_ERR_IO = 3,               /* filesystem failure */
  WP_ERR_PLANNER = 4,          /* planner could not produce a trajectory */
  WP_ERR_INTERNAL = 5
} wp_status;

const char* wp_status_name(wp_status s);
const char* wp_last_error(void);
const char* wp_version(void);

/* ------------------------------------------------------------------ */
/* configuration overrides                                            */

typedef struct wp_options wp_options;

wp_options* wp_options_create(void);
void wp_options_destroy(wp_options* o);
/* Dotted keys, e.g. ("wind.A_x", "2.0") or ("pinn.epochs", "500").
 * Unknown keys are rejected. */
wp_status wp_options_set(wp_options* o, const char* key, const char* value);

/* ------------------------------------------------------------------ */
/* scenarios                                                          */

typedef struct wp_scenario wp_scenario;

wp_status wp_scenario_load(const char* path, const wp_options* overrides,
                           wp_scenario** out);
wp_status wp_scenario_parse(const char* text, const wp_options* overrides,
                            wp_scenario** out);
void wp_scenario_destroy(wp_scenario* s);
size_t wp_scenario_obstacle_count(const wp_scenario* s);
const char* wp_scenario_name(const wp_scenario* s);

/* ------------------------------------------------------------------ */
/* trajectories                                                       */

typedef struct wp_trajectory wp_trajectory;

void wp_trajectory_destroy(wp_trajectory* t);
size_t wp_trajectory_samples(const wp_trajectory* t);
/* column: 0=t 1=x 2=y 3=vx 4=vy 5=ux 6=uy; buf must hold
 * wp_trajectory_samples() doubles. */
wp_status wp_trajectory_column(const wp_trajectory* t, int column, double* buf,
                               size_t buflen);
wp_status wp_trajectory_save_csv(const wp_trajectory* t, const char* path);
wp_status wp_trajectory_load_csv(const char* path, const char* planner_tag,
                                 wp_trajectory** out);

/* ------------------------------------------------------------------ */
/* planning                                                           */

typedef struct wp_plan_result wp_plan_result;
typedef void (*wp_progress_fn)(int done, int total, double loss, void* user);

/* planner: "pinn" | "astar" | "kinorrt". overrides and progress may be
 * NULL. */
wp_status wp_plan(const wp_scenario* s, const char* planner, uint64_t seed,
                  const wp_options* overrides, wp_progress_fn progress,
                  void* user, wp_plan_result** out);
void wp_plan_result_destroy(wp_plan_result* r);
const wp_trajectory* wp_plan_result_trajectory(const wp_plan_result* r);
const char* wp_plan_result_log(const wp_plan_result* r);
int wp_plan_result_has_train_report(const wp_plan_result* r);
wp_status wp_plan_result_save_train_report(const wp_plan_result* r,
                                           const char* csv_path);
int wp_plan_result_has_checkpoint(const wp_plan_result* r);
wp_status wp_plan_result_save_checkpoint(const wp_plan_result* r,
                                         const char* path);

/* ------------------------------------------------------------------ */
/* metrics and figures                                                */

typedef struct wp_metrics {
  double e_ctrl;
  double s_ctrl;
  double l_path;
  double t_flight;
  double d_min; /* +inf when the scenario has no obstacles */
} wp_metrics;

wp_status wp_metrics_compute(const wp_trajectory* t, const wp_scenario* s,
                             wp_metrics* out);
wp_status wp_metrics_save_csv(const wp_metrics* list,
                              const char* const* names, size_t n,
                              const char* path);

/* Comparison table (raw + normalized + best-per-metric) as text; returns
 * a heap string, release with wp_string_free. */
wp_status wp_compare_format(const wp_metrics* list, const char* const* names,
                            size_t n, char** out);
wp_status wp_compare_save_svg(const wp_metrics* list, const char* const* names,
                              size_t n, const char* path);
wp_status wp_plot_save_svg(const wp_scenario* s,
                           const wp_trajectory* const* trajectories, size_t n,
                           double wind_time, const char* path);

void wp_string_free(char* s);

#ifdef __cplusplus
}
#endif
#endif /* WINDPLAN_H */
