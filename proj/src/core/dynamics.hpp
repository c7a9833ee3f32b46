#pragma once

#include <cmath>
#include <vector>

#include "core/trajectory.hpp"

namespace windplan {

/// Planar UAV state: position and velocity.
struct State {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;

  State operator+(const State& o) const {
    return {x + o.x, y + o.y, vx + o.vx, vy + o.vy};
  }
  State operator*(double s) const { return {x * s, y * s, vx * s, vy * s}; }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(vx) &&
           std::isfinite(vy);
  }
};

/// Commanded horizontal accelerations.
struct Control {
  double ux = 0.0;
  double uy = 0.0;
};

/// Oscillatory wind field: amplitudes and spatial scales.
struct WindParams {
  double A_x = 0.0;
  double A_y = 0.0;
  double L_x = 10.0;
  double L_y = 10.0;
};

struct DynamicsParams {
  double c_d = 0.3;  // linear drag rate [1/s]
  WindParams wind;
};

template <class S>
struct WindVec {
  S x;
  S y;
};

/// Wind at position (x, y) and time t:
///   Wx = A_x * sin(pi*y/L_y) * cos(2*pi*t)
///   Wy = A_y * sin(pi*x/L_x) * sin(2*pi*t)
/// The temporal phase is reduced modulo the unit period before the trig
/// calls, so wind_at(x, y, t) == wind_at(x, y, t + 1) holds exactly.
/// Generic over the spatial scalar type (plain double, jets, tape nodes).
template <class S>
WindVec<S> wind_at(const WindParams& p, const S& x, const S& y, double t) {
  using std::cos;
  using std::sin;
  constexpr double kPi = 3.14159265358979323846;
  const double phase = 2.0 * kPi * (t - std::floor(t));
  const double cx = p.A_x * std::cos(phase);
  const double cy = p.A_y * std::sin(phase);
  return {sin(y * (kPi / p.L_y)) * cx, sin(x * (kPi / p.L_x)) * cy};
}

/// Drag-and-wind dynamics right-hand side:
///   (dx, dy, dvx, dvy) = (vx, vy, ux - c_d*vx + Wx, uy - c_d*vy + Wy)
State state_derivative(const State& s, const Control& u, double t,
                       const DynamicsParams& p);

/// One classical 4th-order Runge-Kutta step with the control held constant
/// over [t, t+dt]. Throws ConfigError if dt <= 0.
State rk4_step(const State& s, const Control& u, double t, double dt,
               const DynamicsParams& p);

/// Constant control applied for a duration (zero-order hold).
struct ControlSegment {
  Control u;
  double duration = 0.0;
};

/// Forward-integrates a piecewise-constant control schedule at a uniform
/// step dt, recording every substep. Segment durations must be whole
/// multiples of dt. The first sample equals s0 at t = 0. Throws
/// ConfigError on an empty schedule or bad dt, DivergenceError if the
/// state leaves the finite range.
TrajectoryRecord simulate(const State& s0,
                          const std::vector<ControlSegment>& schedule,
                          const DynamicsParams& p, double dt);

}  // namespace windplan
