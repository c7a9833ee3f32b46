#include "core/dynamics.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace windplan {

State state_derivative(const State& s, const Control& u, double t,
                       const DynamicsParams& p) {
  const WindVec<double> w = wind_at(p.wind, s.x, s.y, t);
  return {s.vx, s.vy, u.ux - p.c_d * s.vx + w.x, u.uy - p.c_d * s.vy + w.y};
}

State rk4_step(const State& s, const Control& u, double t, double dt,
               const DynamicsParams& p) {
  if (!(dt > 0.0)) throw ConfigError("rk4_step: dt must be > 0");
  const State k1 = state_derivative(s, u, t, p);
  const State k2 = state_derivative(s + k1 * (dt / 2.0), u, t + dt / 2.0, p);
  const State k3 = state_derivative(s + k2 * (dt / 2.0), u, t + dt / 2.0, p);
  const State k4 = state_derivative(s + k3 * dt, u, t + dt, p);
  return s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
}

TrajectoryRecord simulate(const State& s0,
                          const std::vector<ControlSegment>& schedule,
                          const DynamicsParams& p, double dt) {
  if (schedule.empty()) throw ConfigError("simulate: empty control schedule");
  if (!(dt > 0.0)) throw ConfigError("simulate: dt must be > 0");

  TrajectoryRecord tr;
  State s = s0;
  double t = 0.0;
  long step_index = 0;
  tr.push_row(0.0, s.x, s.y, s.vx, s.vy, schedule.front().u.ux,
              schedule.front().u.uy);

  for (const ControlSegment& seg : schedule) {
    const long steps = std::lround(seg.duration / dt);
    if (steps < 1 || std::fabs(steps * dt - seg.duration) > 1e-9)
      throw ConfigError(
          "simulate: segment duration must be a positive multiple of dt");
    for (long k = 0; k < steps; ++k) {
      s = rk4_step(s, seg.u, t, dt, p);
      ++step_index;
      t = step_index * dt;
      if (!s.finite())
        throw DivergenceError("simulate: state diverged at t = " +
                              std::to_string(t));
      tr.push_row(t, s.x, s.y, s.vx, s.vy, seg.u.ux, seg.u.uy);
    }
  }
  return tr;
}

}  // namespace windplan
