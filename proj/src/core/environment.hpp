#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "core/dynamics.hpp"
#include "core/scalar_math.hpp"

namespace windplan {

/// Static circular obstacle.
struct Obstacle {
  double cx = 0.0;
  double cy = 0.0;
  double r = 1.0;
};

/// Barrier potential shaping: eps stabilizes the inverse-square term,
/// alpha sets the inside-penalty growth rate.
struct BarrierParams {
  double eps = 0.01;
  double alpha = 10.0;
};

struct WorldBounds {
  double xmin = -1.0, xmax = 12.0;
  double ymin = -1.0, ymax = 8.0;
  bool contains(double x, double y) const {
    return x >= xmin && x <= xmax && y >= ymin && y <= ymax;
  }
};

/// Distance from (x, y) to the obstacle boundary; negative inside.
double signed_distance(const Obstacle& o, double x, double y);

/// Single-obstacle barrier term 1/(d^2 + eps) + softplus(-alpha*d).
/// Generic over the scalar type so the same formula drives plain
/// evaluation, jet evaluation, and tape recording.
template <class S>
S barrier_term(const Obstacle& o, const BarrierParams& bp, const S& x,
               const S& y) {
  using std::sqrt;
  const S dx = x - o.cx;
  const S dy = y - o.cy;
  const S d = sqrt(dx * dx + dy * dy) - o.r;
  return 1.0 / (d * d + bp.eps) + softplus(d * (-bp.alpha));
}

/// Sum of barrier terms over all obstacles; 0 for an empty field.
double barrier_phi(std::span<const Obstacle> obstacles,
                   const BarrierParams& bp, double x, double y);

/// Analytic gradient of barrier_phi. Throws ConfigError when (x, y)
/// coincides with an obstacle center, where the radial direction is
/// undefined.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};
Vec2 barrier_grad(std::span<const Obstacle> obstacles, const BarrierParams& bp,
                  double x, double y);

/// Full world definition shared by all planners.
struct Scenario {
  std::string name = "unnamed";
  State start;
  State goal;
  double horizon_T = 1.0;
  WorldBounds bounds;
  std::vector<Obstacle> obstacles;
  DynamicsParams dynamics;
  BarrierParams barrier;
  double u_max = 5.0;

  /// Throws ConfigError naming the offending field on any invariant
  /// violation (positivity, bounds containment, start/goal clearance).
  void validate() const;
};

}  // namespace windplan
