#include "core/planner_astar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "core/errors.hpp"
#include "core/spline.hpp"

namespace windplan::astar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.41421356237309504880;

double point_segment_distance(double px, double py, const Vec2& a,
                              const Vec2& b) {
  const double abx = b.x - a.x;
  const double aby = b.y - a.y;
  const double len2 = abx * abx + aby * aby;
  double t = 0.0;
  if (len2 > 0.0)
    t = std::clamp(((px - a.x) * abx + (py - a.y) * aby) / len2, 0.0, 1.0);
  return std::hypot(px - (a.x + t * abx), py - (a.y + t * aby));
}

double octile(int dx, int dy, double cell) {
  const int adx = std::abs(dx);
  const int ady = std::abs(dy);
  return cell * (std::max(adx, ady) + (kSqrt2 - 1.0) * std::min(adx, ady));
}

}  // namespace

void AstarConfig::validate() const {
  if (!(cell > 0.0)) throw ConfigError("astar: cell size must be > 0");
  if (!(v_ref > 0.0)) throw ConfigError("astar: v_ref must be > 0");
  if (alpha < 0.0 || gamma < 0.0)
    throw ConfigError("astar: cost weights must be >= 0");
  if (samples < 2) throw ConfigError("astar: samples must be >= 2");
}

GridSpec GridSpec::make(const WorldBounds& bounds, double cell) {
  if (!(cell > 0.0)) throw ConfigError("grid: cell size must be > 0");
  GridSpec g;
  g.cell = cell;
  g.bounds = bounds;
  g.nx = std::max(1, static_cast<int>(std::ceil((bounds.xmax - bounds.xmin) / cell)));
  g.ny = std::max(1, static_cast<int>(std::ceil((bounds.ymax - bounds.ymin) / cell)));
  return g;
}

int GridSpec::cell_x(double x) const {
  return std::clamp(static_cast<int>(std::floor((x - bounds.xmin) / cell)), 0,
                    nx - 1);
}

int GridSpec::cell_y(double y) const {
  return std::clamp(static_cast<int>(std::floor((y - bounds.ymin) / cell)), 0,
                    ny - 1);
}

double GridPath::polyline_length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i)
    len += std::hypot(waypoints[i].x - waypoints[i - 1].x,
                      waypoints[i].y - waypoints[i - 1].y);
  return len;
}

bool cell_blocked(const Scenario& sc, const Vec2& center) {
  for (const Obstacle& o : sc.obstacles)
    if (signed_distance(o, center.x, center.y) < 0.0) return true;
  return false;
}

bool edge_valid(const Scenario& sc, const Vec2& a, const Vec2& b) {
  for (const Obstacle& o : sc.obstacles)
    if (point_segment_distance(o.cx, o.cy, a, b) - o.r <= 0.0) return false;
  return true;
}

double edge_cost(const Scenario& sc, const AstarConfig& cfg, const Vec2& from,
                 const Vec2& to, double t_est) {
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  const double dist = std::hypot(dx, dy);
  const double dt = dist / cfg.v_ref;
  const Vec2 mid{0.5 * (from.x + to.x), 0.5 * (from.y + to.y)};
  const WindVec<double> w = wind_at(sc.dynamics.wind, mid.x, mid.y, t_est);
  // Control holding v_ref along the edge at steady state.
  const double vex = cfg.v_ref * dx / dist;
  const double vey = cfg.v_ref * dy / dist;
  const double ux = sc.dynamics.c_d * vex - w.x;
  const double uy = sc.dynamics.c_d * vey - w.y;
  double cost = dt + cfg.alpha * (ux * ux + uy * uy);
  if (!sc.obstacles.empty())
    cost += cfg.gamma * barrier_phi(sc.obstacles, sc.barrier, mid.x, mid.y);
  return cost;
}

SearchResult astar_search(const Scenario& sc, const GridSpec& grid,
                          const AstarConfig& cfg) {
  cfg.validate();
  const int n = grid.nx * grid.ny;
  std::vector<char> blocked(static_cast<std::size_t>(n));
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix)
      blocked[static_cast<std::size_t>(grid.index(ix, iy))] =
          cell_blocked(sc, grid.center(ix, iy)) ? 1 : 0;

  const int sx = grid.cell_x(sc.start.x), sy = grid.cell_y(sc.start.y);
  const int gx = grid.cell_x(sc.goal.x), gy = grid.cell_y(sc.goal.y);
  const int start = grid.index(sx, sy);
  const int goal = grid.index(gx, gy);
  if (blocked[static_cast<std::size_t>(start)])
    throw PlannerError("astar: start cell is blocked");
  if (blocked[static_cast<std::size_t>(goal)])
    throw PlannerError("astar: goal cell is blocked");

  auto heuristic = [&](int ix, int iy) {
    return octile(ix - gx, iy - gy, grid.cell) / cfg.v_ref;
  };

  std::vector<double> g(static_cast<std::size_t>(n), kInf);
  std::vector<double> g_time(static_cast<std::size_t>(n), 0.0);
  std::vector<int> parent(static_cast<std::size_t>(n), -1);

  // (f, insertion tick, cell, g at push) — ties resolved by insertion order.
  using Entry = std::tuple<double, long, int, double>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
  long tick = 0;
  g[static_cast<std::size_t>(start)] = 0.0;
  open.emplace(heuristic(sx, sy), tick++, start, 0.0);

  SearchResult result;
  static const int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static const int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  bool found = false;
  while (!open.empty()) {
    const auto [f, t, u, gu] = open.top();
    open.pop();
    if (gu > g[static_cast<std::size_t>(u)]) continue;  // stale entry
    ++result.expanded;
    if (u == goal) {
      found = true;
      break;
    }
    const int ux = u % grid.nx;
    const int uy = u / grid.nx;
    const Vec2 cu = grid.center(ux, uy);
    for (int k = 0; k < 8; ++k) {
      const int vx = ux + kDx[k];
      const int vy = uy + kDy[k];
      if (vx < 0 || vx >= grid.nx || vy < 0 || vy >= grid.ny) continue;
      const int v = grid.index(vx, vy);
      if (blocked[static_cast<std::size_t>(v)]) continue;
      const Vec2 cv = grid.center(vx, vy);
      if (!edge_valid(sc, cu, cv)) continue;
      const double step =
          edge_cost(sc, cfg, cu, cv, g_time[static_cast<std::size_t>(u)]);
      const double ng = g[static_cast<std::size_t>(u)] + step;
      if (ng < g[static_cast<std::size_t>(v)]) {
        g[static_cast<std::size_t>(v)] = ng;
        g_time[static_cast<std::size_t>(v)] =
            g_time[static_cast<std::size_t>(u)] +
            std::hypot(cv.x - cu.x, cv.y - cu.y) / cfg.v_ref;
        parent[static_cast<std::size_t>(v)] = u;
        open.emplace(ng + heuristic(vx, vy), tick++, v, ng);
      }
    }
  }
  if (!found) throw PlannerError("astar: goal unreachable on the grid");

  result.cost = g[static_cast<std::size_t>(goal)];
  result.arrival_time = g_time[static_cast<std::size_t>(goal)];
  for (int v = goal; v != -1; v = parent[static_cast<std::size_t>(v)])
    result.path.waypoints.push_back(grid.center(v % grid.nx, v / grid.nx));
  std::reverse(result.path.waypoints.begin(), result.path.waypoints.end());
  return result;
}

SmoothResult smooth_spline(const GridPath& path, const Scenario& sc,
                           const AstarConfig& cfg) {
  if (path.waypoints.empty())
    throw ConfigError("smooth_spline: empty grid path");

  // Exact start/goal replace the first/last cell centers.
  std::vector<Vec2> wp = path.waypoints;
  wp.front() = {sc.start.x, sc.start.y};
  wp.back() = {sc.goal.x, sc.goal.y};
  if (wp.size() == 1) wp = {{sc.start.x, sc.start.y}, {sc.goal.x, sc.goal.y}};
  std::vector<Vec2> dedup;
  for (const Vec2& p : wp) {
    if (dedup.empty() || std::hypot(p.x - dedup.back().x,
                                    p.y - dedup.back().y) > 1e-9)
      dedup.push_back(p);
  }
  wp.swap(dedup);
  if (wp.size() < 2)
    throw PlannerError("smooth_spline: degenerate path (start equals goal)");

  SmoothResult out;
  for (int round = 0;; ++round) {
    std::vector<double> s(wp.size(), 0.0);
    for (std::size_t i = 1; i < wp.size(); ++i)
      s[i] = s[i - 1] +
             std::hypot(wp[i].x - wp[i - 1].x, wp[i].y - wp[i - 1].y);
    CubicSpline sx(s, [&] {
      std::vector<double> v(wp.size());
      for (std::size_t i = 0; i < wp.size(); ++i) v[i] = wp[i].x;
      return v;
    }());
    CubicSpline sy(s, [&] {
      std::vector<double> v(wp.size());
      for (std::size_t i = 0; i < wp.size(); ++i) v[i] = wp[i].y;
      return v;
    }());
    const double total = s.back();

    // Collision scan at fine resolution before accepting the fit.
    bool clipped = false;
    if (!sc.obstacles.empty()) {
      const int n_check = 2000;
      for (int k = 0; k <= n_check && !clipped; ++k) {
        const double sk = total * k / n_check;
        const double px = sx.eval(sk), py = sy.eval(sk);
        for (const Obstacle& o : sc.obstacles)
          if (signed_distance(o, px, py) <= 0.0) {
            clipped = true;
            break;
          }
      }
    }
    if (clipped && round < cfg.max_densify) {
      std::vector<Vec2> denser;
      denser.reserve(wp.size() * 2);
      for (std::size_t i = 0; i + 1 < wp.size(); ++i) {
        denser.push_back(wp[i]);
        denser.push_back({0.5 * (wp[i].x + wp[i + 1].x),
                          0.5 * (wp[i].y + wp[i + 1].y)});
      }
      denser.push_back(wp.back());
      wp.swap(denser);
      ++out.densify_rounds;
      continue;
    }
    if (clipped)
      throw PlannerError("smooth_spline: could not clear obstacles after "
                         "waypoint densification");

    const double T = total / cfg.v_ref;
    TrajectoryRecord tr;
    tr.planner = "astar";
    tr.reserve(static_cast<std::size_t>(cfg.samples));
    for (int k = 0; k < cfg.samples; ++k) {
      const double t = T * k / (cfg.samples - 1);
      const double sk = std::min(total, t * cfg.v_ref);
      const double px = sx.eval(sk), py = sy.eval(sk);
      const double vx = sx.deriv(sk) * cfg.v_ref;
      const double vy = sy.deriv(sk) * cfg.v_ref;
      const double ax = sx.deriv2(sk) * cfg.v_ref * cfg.v_ref;
      const double ay = sy.deriv2(sk) * cfg.v_ref * cfg.v_ref;
      const WindVec<double> w = wind_at(sc.dynamics.wind, px, py, t);
      const double ux = ax + sc.dynamics.c_d * vx - w.x;
      const double uy = ay + sc.dynamics.c_d * vy - w.y;
      if (std::max(std::fabs(ux), std::fabs(uy)) > sc.u_max)
        ++out.u_max_violations;
      tr.push_row(t, px, py, vx, vy, ux, uy);
    }
    out.trajectory = std::move(tr);
    return out;
  }
}

AstarPlan plan(const Scenario& sc, const AstarConfig& cfg) {
  AstarPlan p;
  const GridSpec grid = GridSpec::make(sc.bounds, cfg.cell);
  p.search = astar_search(sc, grid, cfg);
  SmoothResult sm = smooth_spline(p.search.path, sc, cfg);
  p.trajectory = std::move(sm.trajectory);
  p.densify_rounds = sm.densify_rounds;
  p.u_max_violations = sm.u_max_violations;
  return p;
}

}  // namespace windplan::astar
