#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "core/dynamics.hpp"
#include "core/errors.hpp"
#include "core/rng.hpp"
#include "test_util.hpp"

using namespace windplan;

TEST_CASE("wind field hits the exact trig zeros and ones") {
  WindParams p{1.0, 1.0, 10.0, 10.0};
  const auto w = wind_at(p, 3.0, 5.0, 0.0);
  CHECK(w.x == doctest::Approx(1.0).epsilon(1e-15));  // sin(pi/2)*cos(0)
  CHECK(w.y == doctest::Approx(0.0).epsilon(1e-15));  // sin(0)=0 at t=0

  // y = 0 kills the x component for any parameters
  WindParams q{3.7, 2.2, 4.0, 6.0};
  CHECK(wind_at(q, 1.23, 0.0, 0.77).x == 0.0);
}

TEST_CASE("wind field matches a hand evaluation at t=0.125") {
  WindParams p{2.0, 2.0, 10.0, 10.0};
  const auto w = wind_at(p, 5.0, 5.0, 0.125);
  CHECK(w.x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(w.y == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("wind amplitude bound and exact unit periodicity") {
  std::mt19937_64 rng(123);
  for (int k = 0; k < 2000; ++k) {
    WindParams p{uniform_range(rng, 0.0, 5.0), uniform_range(rng, 0.0, 5.0),
                 uniform_range(rng, 0.5, 20.0), uniform_range(rng, 0.5, 20.0)};
    const double x = uniform_range(rng, -50.0, 50.0);
    const double y = uniform_range(rng, -50.0, 50.0);
    const double t = uniform_range(rng, -3.0, 7.0);
    const auto w = wind_at(p, x, y, t);
    CHECK(std::fabs(w.x) <= p.A_x + 1e-15);
    CHECK(std::fabs(w.y) <= p.A_y + 1e-15);
    const auto w1 = wind_at(p, x, y, t + 1.0);
    CHECK(w.x == w1.x);  // exact: phase is reduced mod 1 before the trig
    CHECK(w.y == w1.y);
  }
}

TEST_CASE("state derivative essentials") {
  DynamicsParams p;
  p.c_d = 0.3;
  p.wind = {0.0, 0.0, 10.0, 10.0};

  const State rest = state_derivative({0, 0, 0, 0}, {0, 0}, 0.0, p);
  CHECK(rest.x == 0.0);
  CHECK(rest.vx == 0.0);
  CHECK(rest.vy == 0.0);

  const State drag = state_derivative({0, 0, 1, 0}, {0, 0}, 0.0, p);
  CHECK(drag.x == doctest::Approx(1.0));
  CHECK(drag.vx == doctest::Approx(-0.3));
  CHECK(drag.vy == doctest::Approx(0.0));

  p.wind = {1.0, 1.0, 10.0, 10.0};
  const State windy = state_derivative({3, 5, 0, 0}, {0, 0}, 0.0, p);
  CHECK(windy.vx == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(windy.vy == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("rk4 integrates straight-line motion exactly") {
  DynamicsParams p;
  // raw params structs are pure math; c_d > 0 is enforced at scenario level
  p.c_d = 0.0;
  p.wind = {0.0, 0.0, 10.0, 10.0};
  const State s = rk4_step({0, 0, 1, 2}, {0, 0}, 0.0, 0.5, p);
  CHECK(s.x == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.y == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.vx == doctest::Approx(1.0));
  CHECK(s.vy == doctest::Approx(2.0));
}

TEST_CASE("rk4 against the closed-form drag decay") {
  DynamicsParams p;
  p.c_d = 0.3;
  p.wind = {0.0, 0.0, 10.0, 10.0};
  State s{0, 0, 1, 0};
  const double dt = 0.01;
  for (int k = 0; k < 100; ++k) s = rk4_step(s, {0, 0}, k * dt, dt, p);
  const double exact = std::exp(-0.3);
  CHECK(testutil::rel_err(s.vx, exact) < 1e-8);
}

TEST_CASE("rk4 shows fourth-order convergence") {
  DynamicsParams p;
  p.c_d = 2.0;
  p.wind = {0.0, 0.0, 10.0, 10.0};
  const double exact = std::exp(-2.0);
  std::vector<double> dts{0.2, 0.1, 0.05, 0.025};
  std::vector<double> errs;
  for (double dt : dts) {
    State s{0, 0, 1, 0};
    const long n = std::lround(1.0 / dt);
    for (long k = 0; k < n; ++k) s = rk4_step(s, {0, 0}, k * dt, dt, p);
    errs.push_back(std::fabs(s.vx - exact));
  }
  // least-squares slope of log err vs log dt over one decade
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    const double lx = std::log(dts[i]);
    const double ly = std::log(errs[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  const double n = static_cast<double>(dts.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("rk4 rejects a degenerate step") {
  DynamicsParams p;
  CHECK_THROWS_AS(rk4_step({0, 0, 0, 0}, {0, 0}, 0.0, 0.0, p), ConfigError);
}

TEST_CASE("simulate: hover against the wind stays near the start, O(dt^2)") {
  DynamicsParams p;
  p.c_d = 0.3;
  p.wind = {1.0, 1.0, 10.0, 10.0};
  const double x0 = 3.0, y0 = 5.0;
  auto drift = [&](double dt) {
    std::vector<ControlSegment> schedule;
    const long n = std::lround(1.0 / dt);
    for (long k = 0; k < n; ++k) {
      // per-step compensation samples the wind at the step midpoint
      const auto w = wind_at(p.wind, x0, y0, (k + 0.5) * dt);
      schedule.push_back({{-w.x, -w.y}, dt});
    }
    const TrajectoryRecord tr = simulate({x0, y0, 0, 0}, schedule, p, dt);
    return std::hypot(tr.x.back() - x0, tr.y.back() - y0);
  };
  const double e1 = drift(2e-3);
  const double e2 = drift(1e-3);
  CHECK(e2 < 1e-6);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));  // second order
}

TEST_CASE("simulate: constant-acceleration kinematics") {
  DynamicsParams p;
  p.c_d = 0.0;
  p.wind = {0.0, 0.0, 10.0, 10.0};
  const TrajectoryRecord tr =
      simulate({0, 0, 0, 0}, {{{1.0, 0.0}, 2.0}}, p, 0.01);
  CHECK(std::fabs(tr.x.back() - 2.0) < 1e-6);
  CHECK(std::fabs(tr.vx.back() - 2.0) < 1e-6);
  CHECK(tr.t.front() == 0.0);
  CHECK(tr.x.front() == 0.0);
}

TEST_CASE("simulate rejects an empty schedule") {
  DynamicsParams p;
  CHECK_THROWS_AS(simulate({0, 0, 0, 0}, {}, p, 0.01), ConfigError);
}

TEST_CASE("drag dissipates speed when unforced") {
  DynamicsParams p;
  p.c_d = 0.4;
  p.wind = {0.0, 0.0, 10.0, 10.0};
  const TrajectoryRecord tr =
      simulate({0, 0, 1.3, -0.8}, {{{0.0, 0.0}, 3.0}}, p, 0.01);
  double prev = std::hypot(tr.vx.front(), tr.vy.front());
  for (std::size_t i = 1; i < tr.size(); ++i) {
    const double speed = std::hypot(tr.vx[i], tr.vy[i]);
    CHECK(speed <= prev + 1e-12);
    prev = speed;
  }
}
