#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "core/environment.hpp"
#include "core/trajectory.hpp"

namespace windplan::metrics {

/// The five evaluation scalars for one planner. d_min is +infinity when
/// the scenario has no obstacles (rendered as "n/a" in tables).
struct MetricsReport {
  std::string planner;
  double e_ctrl = 0.0;   // mean squared control magnitude
  double s_ctrl = 0.0;   // mean squared control rate
  double l_path = 0.0;   // arc length
  double t_flight = 0.0; // duration
  double d_min = 0.0;    // minimum signed obstacle clearance
};

/// (1/T) * integral of |u|^2 dt (trapezoid).
double energy_index(const TrajectoryRecord& tr);

/// (1/T) * integral of |du/dt|^2 dt with central differences for du/dt
/// (one-sided at the ends). Requires >= 3 samples.
double smoothness_index(const TrajectoryRecord& tr);

/// Sum of consecutive position displacements.
double path_length(const TrajectoryRecord& tr);

/// t_last - t_first. Throws on a non-monotone grid.
double flight_time(const TrajectoryRecord& tr);

/// Minimum over samples and obstacles of the signed distance; +infinity
/// with no obstacles. Sample-resolution bound: the continuous minimum may
/// be lower than this sampled value.
double min_safety_margin(const TrajectoryRecord& tr,
                         std::span<const Obstacle> obstacles);

/// Tightens a sampled d_min by re-evaluating a continuously evaluable
/// trajectory at 10x resolution inside the bracket around the minimizing
/// sample. `position_at` maps time to (x, y).
using PositionFn = std::function<Vec2(double t)>;
double min_safety_margin_refined(const TrajectoryRecord& tr,
                                 std::span<const Obstacle> obstacles,
                                 const PositionFn& position_at);

MetricsReport compute_all(const TrajectoryRecord& tr, const Scenario& sc);

/// Cross-planner comparison: per metric, values divided by the maximum
/// across planners (d_min included, as a benefit metric), plus a ranking
/// (indices from best to worst; cost metrics ascending, d_min descending).
struct Comparison {
  std::vector<std::string> names;
  std::vector<MetricsReport> raw;
  // normalized[m][p]: metric m in {e_ctrl, s_ctrl, l_path, t_flight, d_min}
  std::vector<std::vector<double>> normalized;
  std::vector<std::vector<int>> ranking;
};
Comparison compare(std::span<const MetricsReport> reports);

/// Human-readable comparison table (raw values, normalized values, ranks).
std::string format_table(const Comparison& c);

inline const char* const kMetricNames[5] = {"E_ctrl", "S_ctrl", "L_path",
                                            "T_flight", "d_min"};

}  // namespace windplan::metrics
