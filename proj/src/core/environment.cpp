#include "core/environment.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace windplan {

double signed_distance(const Obstacle& o, double x, double y) {
  return std::hypot(x - o.cx, y - o.cy) - o.r;
}

double barrier_phi(std::span<const Obstacle> obstacles,
                   const BarrierParams& bp, double x, double y) {
  double total = 0.0;
  for (const Obstacle& o : obstacles) total += barrier_term(o, bp, x, y);
  return total;
}

Vec2 barrier_grad(std::span<const Obstacle> obstacles, const BarrierParams& bp,
                  double x, double y) {
  Vec2 g;
  for (const Obstacle& o : obstacles) {
    const double dx = x - o.cx;
    const double dy = y - o.cy;
    const double rho = std::hypot(dx, dy);
    if (rho == 0.0)
      throw ConfigError("barrier_grad: query point at an obstacle center");
    const double d = rho - o.r;
    const double q = d * d + bp.eps;
    // dPhi/dd for one obstacle; chain with grad d = (dx, dy)/rho.
    const double dphi_dd = -2.0 * d / (q * q) - bp.alpha * logistic(-bp.alpha * d);
    g.x += dphi_dd * dx / rho;
    g.y += dphi_dd * dy / rho;
  }
  return g;
}

void Scenario::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError("scenario: field '" + field + "' " + why);
  };
  if (!(horizon_T > 0.0)) fail("horizon_T", "must be > 0");
  if (!(u_max > 0.0)) fail("u_max", "must be > 0");
  if (!(dynamics.c_d > 0.0)) fail("dynamics.c_d", "must be > 0");
  if (!(dynamics.wind.L_x > 0.0)) fail("wind.L_x", "must be > 0");
  if (!(dynamics.wind.L_y > 0.0)) fail("wind.L_y", "must be > 0");
  if (!std::isfinite(dynamics.wind.A_x) || !std::isfinite(dynamics.wind.A_y))
    fail("wind.A_x/A_y", "must be finite");
  if (!(barrier.eps > 0.0)) fail("barrier.eps", "must be > 0");
  if (!(barrier.alpha > 0.0)) fail("barrier.alpha", "must be > 0");
  if (!(bounds.xmin < bounds.xmax)) fail("bounds", "requires xmin < xmax");
  if (!(bounds.ymin < bounds.ymax)) fail("bounds", "requires ymin < ymax");
  if (!start.finite()) fail("start", "must be finite");
  if (!goal.finite()) fail("goal", "must be finite");
  if (!bounds.contains(start.x, start.y)) fail("start", "lies outside bounds");
  if (!bounds.contains(goal.x, goal.y)) fail("goal", "lies outside bounds");
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const Obstacle& o = obstacles[i];
    const std::string tag = "obstacle[" + std::to_string(i) + "]";
    if (!(o.r > 0.0)) fail(tag + ".r", "must be > 0");
    if (!std::isfinite(o.cx) || !std::isfinite(o.cy))
      fail(tag, "center must be finite");
    if (signed_distance(o, start.x, start.y) <= 0.0)
      fail("start", "is inside " + tag);
    if (signed_distance(o, goal.x, goal.y) <= 0.0)
      fail("goal", "is inside " + tag);
  }
}

}  // namespace windplan
