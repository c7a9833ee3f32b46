#pragma once

#include <vector>

#include "core/environment.hpp"
#include "core/trajectory.hpp"

namespace windplan::astar {

struct AstarConfig {
  double cell = 0.25;    // grid resolution [m]
  double v_ref = 1.5;    // reference speed for traversal time and controls
  double alpha = 0.01;   // control-effort weight in the edge cost
  double gamma = 0.1;    // barrier weight in the edge cost
  int samples = 400;     // rows in the emitted trajectory
  int max_densify = 5;   // waypoint-insertion rounds if the spline clips

  void validate() const;
};

/// Uniform 8-connected grid over the scenario bounds.
struct GridSpec {
  double cell = 0.25;
  WorldBounds bounds;
  int nx = 0, ny = 0;

  static GridSpec make(const WorldBounds& bounds, double cell);

  Vec2 center(int ix, int iy) const {
    return {bounds.xmin + (ix + 0.5) * cell, bounds.ymin + (iy + 0.5) * cell};
  }
  int cell_x(double x) const;
  int cell_y(double y) const;
  int index(int ix, int iy) const { return iy * nx + ix; }
};

/// Ordered cell-center waypoints; consecutive entries are 8-neighbors.
struct GridPath {
  std::vector<Vec2> waypoints;
  double polyline_length() const;
};

/// A cell is blocked when its center lies strictly inside an obstacle.
bool cell_blocked(const Scenario& sc, const Vec2& center);

/// An edge is usable when neither endpoint cell is blocked and the
/// straight segment between the centers keeps strictly positive clearance
/// to every obstacle (8-connected moves can otherwise clip boundaries
/// between free centers).
bool edge_valid(const Scenario& sc, const Vec2& a, const Vec2& b);

/// Wind-aware edge cost: traversal time + alpha*|u|^2 + gamma*Phi at the
/// edge midpoint, with u the steady-state control holding speed v_ref along
/// the edge against drag and the wind sampled at (midpoint, t_est).
double edge_cost(const Scenario& sc, const AstarConfig& cfg, const Vec2& from,
                 const Vec2& to, double t_est);

struct SearchResult {
  GridPath path;
  double cost = 0.0;
  double arrival_time = 0.0;
  int expanded = 0;
};

/// Cost-optimal 8-connected search under edge_cost with the octile-time
/// heuristic. Throws PlannerError when start/goal cells are blocked or the
/// goal is unreachable.
SearchResult astar_search(const Scenario& sc, const GridSpec& grid,
                          const AstarConfig& cfg);

struct SmoothResult {
  TrajectoryRecord trajectory;
  int densify_rounds = 0;
  int u_max_violations = 0;  // samples with max(|ux|,|uy|) > u_max
};

/// Natural cubic splines through the waypoints (endpoints replaced by the
/// exact start/goal), chord-length parameterized, retimed at v_ref and
/// resampled uniformly. Controls recover the accelerations the dynamics
/// require along the spline. If the smoothed curve clips an obstacle,
/// waypoint midpoints are inserted and the fit retried.
SmoothResult smooth_spline(const GridPath& path, const Scenario& sc,
                           const AstarConfig& cfg);

struct AstarPlan {
  TrajectoryRecord trajectory;
  SearchResult search;
  int densify_rounds = 0;
  int u_max_violations = 0;
};

AstarPlan plan(const Scenario& sc, const AstarConfig& cfg);

}  // namespace windplan::astar
