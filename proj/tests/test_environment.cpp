#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "core/environment.hpp"
#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/scenario_io.hpp"
#include "test_util.hpp"

using namespace windplan;
using testutil::rel_err;

TEST_CASE("signed distance: center, outside, boundary") {
  const Obstacle o{5.0, 3.0, 1.0};
  CHECK(signed_distance(o, 5.0, 3.0) == doctest::Approx(-1.0));
  CHECK(signed_distance(o, 7.0, 3.0) == doctest::Approx(1.0));
  CHECK(signed_distance(o, 5.0, 4.0) == doctest::Approx(0.0));
}

TEST_CASE("barrier value: empty field and scalar spot checks") {
  const BarrierParams bp{0.01, 10.0};
  CHECK(barrier_phi({}, bp, 1.0, 2.0) == 0.0);

  // single obstacle at distance d=1
  const std::vector<Obstacle> one{{0.0, 0.0, 1.0}};
  const double at_d1 = barrier_phi(one, bp, 2.0, 0.0);
  CHECK(at_d1 == doctest::Approx(1.0 / 1.01 + std::log1p(std::exp(-10.0)))
                     .epsilon(1e-12));
  CHECK(at_d1 == doctest::Approx(0.990144).epsilon(1e-4));

  // at the center: d = -1
  const double at_center = barrier_phi(one, bp, 0.0, 0.0);
  CHECK(at_center ==
        doctest::Approx(1.0 / 1.01 + std::log1p(std::exp(10.0))).epsilon(1e-12));
  CHECK(at_center == doctest::Approx(10.990144).epsilon(1e-4));
}

TEST_CASE("barrier decreases strictly with clearance outside the obstacle") {
  // The inverse-square term peaks at d = 0, so the potential is not
  // monotone inside the disc; strict decrease holds on the outside ray,
  // which is where the field steers planners.
  const BarrierParams bp{0.01, 10.0};
  const std::vector<Obstacle> one{{0.0, 0.0, 0.8}};
  double prev = barrier_phi(one, bp, 0.8, 0.0);  // d = 0
  for (double x = 0.85; x < 6.0; x += 0.05) {
    const double phi = barrier_phi(one, bp, x, 0.0);
    CHECK(phi < prev);
    CHECK(phi > 0.0);
    prev = phi;
  }
  // interior shape: boundary beats both the center and the far field
  const double at_boundary = barrier_phi(one, bp, 0.8, 0.0);
  CHECK(at_boundary > barrier_phi(one, bp, 0.0, 0.0));
  CHECK(at_boundary > barrier_phi(one, bp, 2.0, 0.0));
}

TEST_CASE("two-obstacle barrier is the sum of the single-obstacle values") {
  const BarrierParams bp{0.02, 7.0};
  const Obstacle a{1.0, 2.0, 0.5};
  const Obstacle b{-1.5, 0.5, 1.1};
  const double x = 0.3, y = 0.9;
  const std::vector<Obstacle> both{a, b};
  CHECK(barrier_phi(both, bp, x, y) ==
        doctest::Approx(barrier_phi({&a, 1}, bp, x, y) +
                        barrier_phi({&b, 1}, bp, x, y))
            .epsilon(1e-14));
}

TEST_CASE("analytic barrier gradient matches finite differences") {
  std::mt19937_64 rng(99);
  const double h = 1e-5;
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<Obstacle> obstacles;
    const int n_obs = 1 + static_cast<int>(uniform01(rng) * 3.0);
    for (int i = 0; i < n_obs; ++i)
      obstacles.push_back({uniform_range(rng, -3.0, 3.0),
                           uniform_range(rng, -3.0, 3.0),
                           uniform_range(rng, 0.3, 1.5)});
    const BarrierParams bp{uniform_range(rng, 0.005, 0.05),
                           uniform_range(rng, 4.0, 15.0)};
    const double x = uniform_range(rng, -4.0, 4.0);
    const double y = uniform_range(rng, -4.0, 4.0);
    bool near_center = false;
    for (const auto& o : obstacles)
      if (std::hypot(x - o.cx, y - o.cy) < 1e-3) near_center = true;
    if (near_center) continue;

    const Vec2 g = barrier_grad(obstacles, bp, x, y);
    const double fdx = (barrier_phi(obstacles, bp, x + h, y) -
                        barrier_phi(obstacles, bp, x - h, y)) /
                       (2 * h);
    const double fdy = (barrier_phi(obstacles, bp, x, y + h) -
                        barrier_phi(obstacles, bp, x, y - h)) /
                       (2 * h);
    const double scale =
        std::max({1e-6, std::fabs(g.x), std::fabs(g.y), std::fabs(fdx)});
    CHECK(std::fabs(g.x - fdx) / scale < 1e-5);
    CHECK(std::fabs(g.y - fdy) / scale < 1e-5);
    ++checked;
  }
  CHECK(checked > 900);
}

TEST_CASE("gradient is radial; the repulsive force is its negation") {
  const BarrierParams bp{0.01, 10.0};
  const std::vector<Obstacle> one{{5.0, 3.0, 1.0}};
  // Phi falls off with clearance, so its gradient at an outside point is
  // directed toward the obstacle; -grad(Phi) is the outward repulsion.
  const Vec2 g = barrier_grad(one, bp, 7.0, 3.0);
  CHECK(-g.x > 0.0);
  CHECK(g.y == doctest::Approx(0.0));
  CHECK(barrier_grad({}, bp, 0.0, 0.0).x == 0.0);
  CHECK_THROWS_AS(barrier_grad(one, bp, 5.0, 3.0), ConfigError);
}

TEST_CASE("bundled standard scenario loads with the documented geometry") {
  const Scenario sc = testutil::load_bundled("standard.scenario");
  CHECK(sc.name == "standard");
  CHECK(sc.start.x == 0.0);
  CHECK(sc.start.y == 0.0);
  CHECK(sc.goal.x == 10.0);
  CHECK(sc.goal.y == 6.0);
  CHECK(sc.goal.vx == 0.0);
  CHECK(sc.obstacles.size() == 3);
  CHECK(sc.horizon_T > 0.0);

  // the straight start-goal segment must cross at least one obstacle
  bool crosses = false;
  for (int k = 0; k <= 1000; ++k) {
    const double x = sc.start.x + (sc.goal.x - sc.start.x) * k / 1000.0;
    const double y = sc.start.y + (sc.goal.y - sc.start.y) * k / 1000.0;
    for (const auto& o : sc.obstacles)
      if (signed_distance(o, x, y) < 0.0) crosses = true;
  }
  CHECK(crosses);
}

TEST_CASE("bundled dense scenario has a denser obstacle field") {
  const Scenario dense = testutil::load_bundled("dense.scenario");
  const Scenario standard = testutil::load_bundled("standard.scenario");
  CHECK(dense.obstacles.size() >= 6);
  CHECK(dense.obstacles.size() > standard.obstacles.size());
}

TEST_CASE("scenario invariants reject a goal inside an obstacle") {
  const char* doc = R"(
schema_version = 1
[scenario]
start = 0 0 0 0
goal = 5 5 0 0
horizon_T = 4
[obstacle]
cx = 5
cy = 5
r = 1
)";
  Options none;
  CHECK_THROWS_WITH_AS(io::parse_scenario(doc, none),
                       doctest::Contains("goal"), ConfigError);
}

TEST_CASE("scenario parser reports unknown structure and bad numbers") {
  Options none;
  CHECK_THROWS_AS(io::parse_scenario("schema_version = 1\nfoo = 1\n", none),
                  ParseError);
  CHECK_THROWS_AS(io::parse_scenario("[scenario]\nstart = 0 0 0 0\n", none),
                  ParseError);  // missing schema_version
  CHECK_THROWS_WITH_AS(
      io::parse_scenario("schema_version = 1\n[scenario]\nstart = a b c d\n"
                         "goal = 1 1 0 0\nhorizon_T = 2\n",
                         none),
      doctest::Contains("start"), ParseError);
}

TEST_CASE("overrides take precedence over file values") {
  const Scenario base = testutil::load_bundled("standard.scenario");
  Options o;
  o.set("wind.A_x", "2.5");
  o.set("scenario.horizon_T", "12.0");
  Options copy = o;
  const Scenario sc = io::load_scenario(
      std::string(WINDPLAN_SCENARIO_DIR) + "/standard.scenario", copy);
  CHECK(sc.dynamics.wind.A_x == 2.5);
  CHECK(sc.horizon_T == 12.0);
  CHECK(sc.dynamics.wind.A_y == base.dynamics.wind.A_y);
}

TEST_CASE("unknown override keys are rejected") {
  Options o;
  CHECK_THROWS_AS(o.set("wind.A_z", "1"), ConfigError);
  CHECK_THROWS_AS(o.set("pinn.epoch", "1"), ConfigError);
  o.set("pinn.epochs", "50");
  CHECK(o.get_int("pinn.epochs", 0) == 50);
}
