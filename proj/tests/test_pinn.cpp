#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "core/adam.hpp"
#include "core/dynamics.hpp"
#include "core/errors.hpp"
#include "core/pinn.hpp"
#include "core/rng.hpp"
#include "core/tape.hpp"
#include "test_util.hpp"

using namespace windplan;
using namespace windplan::diff;
using namespace windplan::pinn;
using testutil::fd_gradient;
using testutil::load_bundled;
using testutil::rel_err;

namespace {

Scenario degenerate_scenario() {
  Scenario sc;
  sc.name = "degenerate";
  sc.start = {0.3, 0.2, 0.0, 0.0};
  sc.goal = sc.start;
  sc.horizon_T = 2.0;
  sc.bounds = {-2.0, 2.0, -2.0, 2.0};
  sc.dynamics.c_d = 0.3;
  sc.dynamics.wind = {0.0, 0.0, 10.0, 10.0};
  return sc;
}

TrainConfig tiny_train_config(int epochs, std::uint64_t seed) {
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.collocation_points = 256;
  cfg.quadrature_nodes = 64;
  cfg.learning_rate = 1e-3;
  cfg.seed = seed;
  cfg.net.hidden_layers = 2;
  cfg.net.hidden_width = 32;
  cfg.net.omega0 = 10.0;
  cfg.net.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("hover solution satisfies the dynamics identically") {
  Scenario sc = load_bundled("standard.scenario");
  const Evaluator hover = hover_evaluator(sc);
  for (double tau : {0.0, 0.17, 0.5, 0.93, 1.0}) {
    const auto r = residuals(hover(tau), tau, sc);
    for (double ri : r) CHECK(ri == 0.0);  // exact cancellation
  }
  const auto batch = uniform_grid(64);
  CHECK(loss_phys_eval(hover, sc, batch) == 0.0);
}

TEST_CASE("hover residuals vanish for any horizon") {
  Scenario sc = load_bundled("standard.scenario");
  for (double T : {1.0, 5.0, 20.0}) {
    sc.horizon_T = T;
    const Evaluator hover = hover_evaluator(sc);
    for (double tau : {0.1, 0.6}) {
      for (double ri : residuals(hover(tau), tau, sc)) CHECK(ri == 0.0);
    }
  }
}

TEST_CASE("zero network on a windy scenario leaves only the wind residual") {
  Scenario sc = load_bundled("standard.scenario");
  sc.start = {3.0, 5.0, 0.0, 0.0};
  NetEval zero{};
  const auto r = residuals(zero, 0.0, sc);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 0.0);
  const auto w = wind_at(sc.dynamics.wind, 0.0, 0.0, 0.0);
  CHECK(r[2] == doctest::Approx(-w.x));
  CHECK(r[3] == doctest::Approx(-w.y));
}

TEST_CASE("loss_phys over a duplicated batch is unchanged") {
  const Scenario sc = load_bundled("standard.scenario");
  TrainConfig cfg = tiny_train_config(1, 3);
  const MlpLayout layout = MlpLayout::build(cfg.net);
  const ParamVector p = init_params(cfg.net);
  const std::vector<double> batch{0.1, 0.4, 0.9};
  const std::vector<double> doubled{0.1, 0.4, 0.9, 0.1, 0.4, 0.9};
  CHECK(loss_phys(layout, p, sc, batch) ==
        doctest::Approx(loss_phys(layout, p, sc, doubled)).epsilon(1e-15));
}

TEST_CASE("boundary loss of the zero network on the standard scenario") {
  const Scenario sc = load_bundled("standard.scenario");
  TrainConfig cfg = tiny_train_config(1, 1);
  const MlpLayout layout = MlpLayout::build(cfg.net);
  const ParamVector zeros(layout.param_count, 0.0);
  // start (0,0,0,0) costs nothing; goal (10,6,0,0) costs 100+36
  CHECK(loss_bc(layout, zeros, sc) == doctest::Approx(136.0));
}

TEST_CASE("boundary loss ignores the obstacle set") {
  Scenario sc = load_bundled("standard.scenario");
  TrainConfig cfg = tiny_train_config(1, 2);
  const MlpLayout layout = MlpLayout::build(cfg.net);
  const ParamVector p = init_params(cfg.net);
  const double with = loss_bc(layout, p, sc);
  std::reverse(sc.obstacles.begin(), sc.obstacles.end());
  CHECK(loss_bc(layout, p, sc) == with);
  sc.obstacles.clear();
  CHECK(loss_bc(layout, p, sc) == with);
}

TEST_CASE("objective loss: zero network and constant-control network") {
  Scenario sc = load_bundled("standard.scenario");
  sc.obstacles.clear();
  TrainConfig cfg = tiny_train_config(1, 5);
  const MlpLayout layout = MlpLayout::build(cfg.net);
  const auto grid = uniform_grid(128);

  LossWeights w;
  w.alpha = 1.0;
  w.beta = 0.0;
  w.gamma = 0.0;
  const ParamVector zeros(layout.param_count, 0.0);
  CHECK(loss_obj(layout, zeros, sc, w, grid) == 0.0);

  // constant u = (1, 0) via the ux output bias
  ParamVector p(layout.param_count, 0.0);
  p[layout.bias_index(layout.layers.size() - 1, 4)] = 1.0;
  CHECK(loss_obj(layout, p, sc, w, grid) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("objective quadrature is grid-converged for a smooth network") {
  const Scenario sc = load_bundled("standard.scenario");
  TrainConfig cfg = tiny_train_config(1, 6);
  cfg.net.omega0 = 5.0;
  const MlpLayout layout = MlpLayout::build(cfg.net);
  const ParamVector p = init_params(cfg.net);
  LossWeights w;  // defaults include the barrier term
  const double coarse = loss_obj(layout, p, sc, w, uniform_grid(256));
  const double fine = loss_obj(layout, p, sc, w, uniform_grid(2560));
  CHECK(rel_err(coarse, fine) < 0.005);
}

TEST_CASE("total loss bookkeeping") {
  const Scenario sc = load_bundled("standard.scenario");
  TrainConfig cfg = tiny_train_config(1, 7);
  const MlpLayout layout = MlpLayout::build(cfg.net);
  const ParamVector p = init_params(cfg.net);
  const auto grid = uniform_grid(64);
  const std::vector<double> batch = uniform_grid(32);

  CurriculumSchedule sched;
  sched.epochs = 100;

  SUBCASE("boundary-only weights reduce the total to L_bc") {
    LossWeights w;
    w.lambda_phys = 0.0;
    w.lambda_obj = 0.0;
    w.lambda_bc = 1.0;
    const auto b = total_loss(layout, p, sc, w, sched, 50, batch, grid);
    CHECK(b.total == doctest::Approx(loss_bc(layout, p, sc)).epsilon(1e-15));
  }

  SUBCASE("epoch-0 curriculum multiplier is the documented ramp start") {
    CHECK(sched.phys_multiplier(0) == doctest::Approx(0.1));
    CHECK(sched.obj_multiplier(0) == doctest::Approx(0.1));
    CHECK(sched.phys_multiplier(50) == doctest::Approx(1.0));
    CHECK(sched.phys_multiplier(99) == doctest::Approx(1.0));
    CHECK(sched.phys_multiplier(25) == doctest::Approx(0.55));
  }

  SUBCASE("weighted components sum to the total") {
    LossWeights w;
    const auto b = total_loss(layout, p, sc, w, sched, 13, batch, grid);
    const double sum = b.weighted_phys + b.weighted_bc + b.weighted_obj;
    CHECK(rel_err(sum, b.total) < 1e-12);
  }
}

TEST_CASE("composite-loss gradient matches finite differences on a tiny net") {
  Scenario sc = testutil::mini_scenario();
  TrainConfig cfg = tiny_train_config(1, 8);
  cfg.net.hidden_layers = 1;
  cfg.net.hidden_width = 4;
  cfg.net.omega0 = 3.0;
  const MlpLayout layout = MlpLayout::build(cfg.net);
  REQUIRE(layout.param_count <= 50);
  ParamVector p = init_params(cfg.net);

  LossWeights w;
  CurriculumSchedule sched;
  sched.epochs = 10;
  const std::vector<double> batch{0.05, 0.31, 0.62, 0.88};
  const auto grid = uniform_grid(16);
  const int epoch = 4;

  const auto grad =
      total_loss_gradient(layout, p, sc, w, sched, epoch, batch, grid);
  auto f = [&](const std::vector<double>& q) {
    return total_loss(layout, q, sc, w, sched, epoch, batch, grid).total;
  };
  const auto fd = fd_gradient(f, p, 1e-6);
  for (std::size_t i = 0; i < grad.size(); ++i)
    CHECK(rel_err(grad[i], fd[i]) < 1e-4);
}

TEST_CASE("gradient is nonzero at initialization on the standard scenario") {
  const Scenario sc = load_bundled("standard.scenario");
  TrainConfig cfg = tiny_train_config(1, 9);
  const MlpLayout layout = MlpLayout::build(cfg.net);
  const ParamVector p = init_params(cfg.net);
  LossWeights w;
  CurriculumSchedule sched;
  sched.epochs = 100;
  const auto grad = total_loss_gradient(layout, p, sc, w, sched, 0,
                                        uniform_grid(32), uniform_grid(64));
  double norm = 0.0;
  for (double g : grad) norm += g * g;
  CHECK(std::sqrt(norm) > 1e-6);
}

TEST_CASE("training a degenerate stay-put scenario converges fast") {
  const Scenario sc = degenerate_scenario();
  TrainConfig cfg = tiny_train_config(500, 21);
  cfg.learning_rate = 2e-3;
  cfg.net.omega0 = 6.0;  // the optimum is a constant; low frequency helps
  LossWeights w;
  CurriculumSchedule sched;
  sched.epochs = cfg.epochs;
  const TrainOutput out = pinn::train(sc, cfg, w, sched);
  CHECK(out.report.rows.size() == 500);
  CHECK(out.report.rows.back().l_total < 1e-3);
}

TEST_CASE("training is deterministic and thread-count independent") {
  const Scenario sc = testutil::mini_scenario();
  TrainConfig cfg = tiny_train_config(40, 33);
  LossWeights w;
  CurriculumSchedule sched;
  sched.epochs = cfg.epochs;

  const TrainOutput a = pinn::train(sc, cfg, w, sched);
  const TrainOutput b = pinn::train(sc, cfg, w, sched);
  CHECK(a.params == b.params);
  REQUIRE(a.report.rows.size() == b.report.rows.size());
  for (std::size_t i = 0; i < a.report.rows.size(); ++i)
    CHECK(a.report.rows[i].l_total == b.report.rows[i].l_total);

  cfg.threads = 2;
  const TrainOutput c = pinn::train(sc, cfg, w, sched);
  CHECK(c.params == a.params);  // block reduction is thread-count invariant
}

TEST_CASE("extract_trajectory samples the network on a uniform grid") {
  const Scenario sc = load_bundled("standard.scenario");
  TrainConfig cfg = tiny_train_config(1, 12);
  const MlpLayout layout = MlpLayout::build(cfg.net);
  const ParamVector p = init_params(cfg.net);

  const TrajectoryRecord tr = extract_trajectory(layout, p, sc, 37);
  CHECK(tr.size() == 37);
  CHECK(tr.planner == "pinn");
  CHECK(tr.t.front() == 0.0);
  CHECK(tr.t.back() == doctest::Approx(sc.horizon_T));

  const TrajectoryRecord two = extract_trajectory(layout, p, sc, 2);
  CHECK(two.size() == 2);
  const auto o0 = forward(layout, p, 0.0);
  const auto o1 = forward(layout, p, 1.0);
  CHECK(two.x.front() == o0[0]);
  CHECK(two.x.back() == o1[0]);
  CHECK_THROWS_AS(extract_trajectory(layout, p, sc, 1), ConfigError);
}

TEST_CASE("divergent training reports a divergence error") {
  const Scenario sc = testutil::mini_scenario();
  TrainConfig cfg = tiny_train_config(20, 3);
  // large enough that the two-layer d/dtau chain overflows after one step
  cfg.learning_rate = 1e200;
  LossWeights w;
  CurriculumSchedule sched;
  sched.epochs = cfg.epochs;
  CHECK_THROWS_AS(pinn::train(sc, cfg, w, sched), DivergenceError);
}

TEST_CASE("network fitted to an integrator rollout has small residuals") {
  // Oracle: generate a smooth trajectory with the reference integrator,
  // regress the network onto its six channels, then check that the
  // dynamics residuals of the fit are small.
  Scenario sc;
  sc.name = "fit";
  sc.start = {0.0, 0.0, 0.5, 0.3};
  sc.goal = {2.0, 1.0, 0.0, 0.0};
  sc.horizon_T = 4.0;
  sc.bounds = {-10.0, 10.0, -10.0, 10.0};
  sc.dynamics.c_d = 0.3;
  sc.dynamics.wind = {1.0, 1.0, 10.0, 10.0};

  const double T = sc.horizon_T;
  const double dt = 0.01;
  std::vector<ControlSegment> schedule;
  const long steps = std::lround(T / dt);
  for (long k = 0; k < steps; ++k) {
    const double t = (k + 0.5) * dt;
    schedule.push_back({{0.6 * std::sin(2.0 * M_PI * t / T),
                         0.4 * std::cos(2.0 * M_PI * t / T)},
                        dt});
  }
  const TrajectoryRecord roll = simulate(sc.start, schedule, sc.dynamics, dt);

  // supervised targets on a uniform tau grid
  const int n_fit = 161;
  std::vector<double> taus(n_fit);
  std::vector<std::array<double, 6>> targets(n_fit);
  for (int i = 0; i < n_fit; ++i) {
    const double tau = static_cast<double>(i) / (n_fit - 1);
    const std::size_t row = static_cast<std::size_t>(
        std::lround(tau * static_cast<double>(roll.size() - 1)));
    taus[i] = tau;
    targets[i] = {roll.x[row],  roll.y[row],  roll.vx[row],
                  roll.vy[row], roll.ux[row], roll.uy[row]};
  }

  MlpConfig net;
  net.hidden_layers = 3;
  net.hidden_width = 64;
  net.omega0 = 20.0;  // the wind ripples at 4 cycles per unit tau
  net.seed = 2024;
  const MlpLayout layout = MlpLayout::build(net);
  ParamVector params = init_params(net);
  AdamState adam =
      AdamState::init(layout.param_count, {1e-2, 0.9, 0.999, 1e-8});

  Tape tape;
  std::vector<double> grad(layout.param_count);
  double fit_loss = 0.0;
  const int n_steps = 6000;
  for (int step = 0; step < n_steps; ++step) {
    adam.cfg.learning_rate =
        step < n_steps / 3 ? 1e-2 : (step < 2 * n_steps / 3 ? 2e-3 : 4e-4);
    std::fill(grad.begin(), grad.end(), 0.0);
    tape.set_params(params);
    fit_loss = 0.0;
    for (int i = 0; i < n_fit; ++i) {
      tape.clear();
      const NodeId out = record_forward(tape, layout, taus[i]);
      NodeId sum = 0;
      for (int c = 0; c < 6; ++c) {
        const NodeId err = tape.shift(
            tape.value_part(out + static_cast<NodeId>(c)), -targets[i][c]);
        const NodeId sq = tape.square(err);
        sum = (c == 0) ? sq : tape.add(sum, sq);
      }
      fit_loss += tape.value(sum) / n_fit;
      tape.backward(sum, grad, 1.0 / n_fit);
    }
    adam_step(adam, params, grad);
  }
  CHECK(fit_loss < 1e-4);  // the regression itself must have converged

  const double ms_res = loss_phys(layout, params, sc, uniform_grid(256));
  CHECK(ms_res < 1e-3);
}
