#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/planner_kinorrt.hpp"
#include "test_util.hpp"

using namespace windplan;
using namespace windplan::rrt;
using testutil::load_bundled;

namespace {

Scenario trivial_scenario() {
  Scenario sc;
  sc.name = "trivial";
  sc.start = {0.0, 0.0, 0.0, 0.0};
  sc.goal = {0.5, 0.0, 0.0, 0.0};
  sc.horizon_T = 2.0;
  sc.bounds = {-3.0, 3.0, -3.0, 3.0};
  sc.dynamics.c_d = 0.3;
  sc.dynamics.wind = {0.0, 0.0, 10.0, 10.0};
  return sc;
}

RrtConfig small_config(std::uint64_t seed) {
  RrtConfig cfg;
  cfg.max_iterations = 200;
  cfg.seed = seed;
  cfg.check_invariants = true;
  return cfg;
}

}  // namespace

TEST_CASE("segment cost: free coasting, constant push, obstacle graze") {
  Scenario sc = trivial_scenario();
  RrtConfig cfg;
  cfg.alpha = 1.0;
  cfg.gamma = 0.1;

  // u = 0 far from any obstacle: essentially free
  std::vector<State> line;
  for (int k = 0; k <= 50; ++k)
    line.push_back({0.01 * k, 0.0, 0.5, 0.0});
  CHECK(segment_cost(line, {0.0, 0.0}, 0.01, sc, cfg) ==
        doctest::Approx(0.0));

  // constant u=(1,0) for 0.5 s with gamma inactive integrates to 0.5
  RrtConfig energy_only = cfg;
  energy_only.gamma = 0.0;
  CHECK(segment_cost(line, {1.0, 0.0}, 0.01, sc, energy_only) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // grazing an obstacle strictly exceeds the same segment without one
  Scenario with_obs = sc;
  with_obs.obstacles = {{0.25, 0.15, 0.1}};
  CHECK(segment_cost(line, {1.0, 0.0}, 0.01, with_obs, cfg) >
        segment_cost(line, {1.0, 0.0}, 0.01, sc, cfg));
}

TEST_CASE("steer picks controls that chase the target") {
  const Scenario sc = trivial_scenario();
  RrtConfig cfg;
  std::mt19937_64 rng(7);

  SUBCASE("stationary target keeps the displacement small") {
    Scenario calm = sc;
    calm.dynamics.c_d = 1e-9;
    const State from{0, 0, 0, 0};
    const auto res = steer(from, 0.0, from, calm, cfg, rng);
    REQUIRE(res.has_value());
    CHECK(std::hypot(res->end.x, res->end.y) < 0.5);
  }
  SUBCASE("target straight ahead selects a forward push") {
    const State from{0, 0, 0, 0};
    const State target{2.5, 0.0, 1.0, 0.0};
    const auto res = steer(from, 0.0, target, sc, cfg, rng);
    REQUIRE(res.has_value());
    CHECK(res->u.ux > 0.0);
    CHECK(std::fabs(res->u.uy) < std::fabs(res->u.ux));
  }
  SUBCASE("segments through an obstacle are rejected") {
    Scenario blockered = sc;
    blockered.obstacles = {{0.4, 0.0, 0.25}};
    // aim straight into the obstacle from close range with no alternatives
    RrtConfig tight = cfg;
    tight.candidates = 64;
    const State from{0.05, 0.0, 1.5, 0.0};  // rolling into the disc
    const auto res = steer(from, 0.0, {0.4, 0.0, 0.0, 0.0}, blockered, tight,
                           rng);
    if (res) {
      // whatever survived must clear the buffer along its whole segment
      CHECK(signed_distance(blockered.obstacles[0], res->end.x, res->end.y) >
            tight.safety_buffer);
    }
  }
}

TEST_CASE("trivial scenario connects fast and short") {
  const Scenario sc = trivial_scenario();
  const RrtConfig cfg = small_config(5);
  const RrtPlan plan = rrt::plan(sc, cfg);
  plan.trajectory.validate();
  CHECK(metrics::path_length(plan.trajectory) < 1.0);
  const double end_err = std::hypot(plan.trajectory.x.back() - sc.goal.x,
                                    plan.trajectory.y.back() - sc.goal.y);
  CHECK(end_err <= cfg.goal_tolerance + 1e-9);
}

TEST_CASE("a single iteration cannot reach a distant goal") {
  const Scenario sc = load_bundled("standard.scenario");
  RrtConfig cfg;
  cfg.max_iterations = 1;
  cfg.seed = 1;
  CHECK_THROWS_AS(rrt::plan(sc, cfg), PlannerError);
}

TEST_CASE("standard scenario: collision-free trajectory into the goal region") {
  const Scenario sc = load_bundled("standard.scenario");
  RrtConfig cfg;
  cfg.max_iterations = 4000;
  cfg.seed = 3;
  cfg.check_invariants = false;  // covered by the smaller runs
  const RrtPlan plan = rrt::plan(sc, cfg);
  plan.trajectory.validate();
  CHECK(metrics::min_safety_margin(plan.trajectory, sc.obstacles) > 0.0);
  const double end_err = std::hypot(plan.trajectory.x.back() - sc.goal.x,
                                    plan.trajectory.y.back() - sc.goal.y);
  CHECK(end_err <= cfg.goal_tolerance + 1e-6);
  CHECK(plan.trajectory.size() == 400);
  CHECK(plan.trajectory.planner == "kinorrt");
}

TEST_CASE("tree bookkeeping: costs, replay feasibility, monotone best cost") {
  Scenario sc = trivial_scenario();
  sc.goal = {1.5, 0.8, 0.0, 0.0};
  sc.obstacles = {{0.8, 0.4, 0.25}};
  RrtConfig cfg = small_config(11);
  cfg.max_iterations = 600;
  const RrtPlan plan = rrt::plan(sc, cfg);  // throws if invariants break

  // every stored edge replays to its stored endpoint
  for (std::size_t i = 1; i < plan.tree.size(); ++i) {
    const TreeNode& n = plan.tree[i];
    const TreeNode& p = plan.tree[static_cast<std::size_t>(n.parent)];
    const TrajectoryRecord replay =
        simulate(p.state, {{n.u_in, n.duration}}, sc.dynamics, cfg.sim_dt);
    const double drift = std::hypot(replay.x.back() - n.state.x,
                                    replay.y.back() - n.state.y) +
                         std::hypot(replay.vx.back() - n.state.vx,
                                    replay.vy.back() - n.state.vy);
    CHECK(drift < 1e-9);
    CHECK(n.cost >= p.cost - 1e-12);
  }

  // recorded best-cost improvements are strictly decreasing
  for (std::size_t i = 1; i < plan.stats.improvements.size(); ++i)
    CHECK(plan.stats.improvements[i].second <
          plan.stats.improvements[i - 1].second);
  REQUIRE(!plan.stats.improvements.empty());
  CHECK(plan.stats.best_cost ==
        doctest::Approx(plan.stats.improvements.back().second));
}

TEST_CASE("fixed seeds reproduce the run; different seeds diverge") {
  const Scenario sc = load_bundled("standard.scenario");
  RrtConfig cfg;
  cfg.max_iterations = 800;
  cfg.seed = 42;
  const RrtPlan a = rrt::plan(sc, cfg);
  const RrtPlan b = rrt::plan(sc, cfg);
  REQUIRE(a.trajectory.size() == b.trajectory.size());
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    CHECK(a.trajectory.x[i] == b.trajectory.x[i]);
    CHECK(a.trajectory.ux[i] == b.trajectory.ux[i]);
  }
  CHECK(a.stats.nodes == b.stats.nodes);
}

TEST_CASE("sampled controls respect the box bound") {
  const Scenario sc = trivial_scenario();
  RrtConfig cfg = small_config(17);
  cfg.max_iterations = 400;
  const RrtPlan plan = rrt::plan(sc, cfg);
  for (std::size_t i = 1; i < plan.tree.size(); ++i) {
    CHECK(std::fabs(plan.tree[i].u_in.ux) <= sc.u_max);
    CHECK(std::fabs(plan.tree[i].u_in.uy) <= sc.u_max);
  }
}
