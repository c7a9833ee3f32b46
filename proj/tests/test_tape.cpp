#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "core/environment.hpp"
#include "core/mlp.hpp"
#include "core/rng.hpp"
#include "core/scalar_math.hpp"
#include "core/tape.hpp"
#include "test_util.hpp"

using namespace windplan;
using namespace windplan::diff;
using testutil::fd_gradient;
using testutil::rel_err;

TEST_CASE("gradient of theta^2 at theta=3 is 6") {
  std::vector<double> params{3.0};
  Tape tape;
  tape.set_params(params);
  const NodeId theta = tape.param(0);
  const NodeId loss = tape.square(theta);
  CHECK(tape.value(loss) == doctest::Approx(9.0));
  std::vector<double> grad(1, 0.0);
  tape.backward(loss, grad);
  CHECK(grad[0] == doctest::Approx(6.0));
}

TEST_CASE("constant loss has zero gradient") {
  std::vector<double> params{1.5, -2.0};
  Tape tape;
  tape.set_params(params);
  const NodeId c = tape.constant(42.0);
  const NodeId loss = tape.square(c);
  std::vector<double> grad(2, 0.0);
  tape.backward(loss, grad);
  CHECK(grad[0] == 0.0);
  CHECK(grad[1] == 0.0);
}

TEST_CASE("expression values match plain evaluation") {
  std::vector<double> params{0.7, -0.4, 1.3};
  Tape tape;
  tape.set_params(params);
  TapeRef a{&tape, tape.param(0)};
  TapeRef b{&tape, tape.param(1)};
  TapeRef c{&tape, tape.param(2)};
  TapeRef expr = sin(a * 2.0 + b) * exp(b / c) + sqrt(c + 1.0) -
                 softplus(a - b) + 1.0 / (a * a + 0.01);
  const double expect = std::sin(0.7 * 2.0 - 0.4) * std::exp(-0.4 / 1.3) +
                        std::sqrt(2.3) - softplus(1.1) +
                        1.0 / (0.49 + 0.01);
  CHECK(tape.value(expr.id) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("scalar expression gradient matches finite differences") {
  auto f = [](const std::vector<double>& p) {
    return std::sin(p[0] * p[1]) / (p[2] * p[2] + 0.3) +
           softplus(-2.0 * p[0]) + std::exp(0.3 * p[2]) +
           std::log(p[1] * p[1] + 1.7) * std::cos(p[0]);
  };
  std::vector<double> params{0.9, -1.2, 0.5};
  Tape tape;
  tape.set_params(params);
  TapeRef a{&tape, tape.param(0)};
  TapeRef b{&tape, tape.param(1)};
  TapeRef c{&tape, tape.param(2)};
  TapeRef expr = sin(a * b) / (c * c + 0.3) + softplus(a * -2.0) +
                 exp(c * 0.3) + log(b * b + 1.7) * cos(a);
  CHECK(tape.value(expr.id) == doctest::Approx(f(params)).epsilon(1e-13));

  std::vector<double> grad(3, 0.0);
  tape.backward(expr.id, grad);
  const auto fd = fd_gradient(f, params);
  for (int i = 0; i < 3; ++i) CHECK(rel_err(grad[i], fd[i]) < 1e-7);
}

TEST_CASE("losses built from dt parts differentiate w.r.t. parameters") {
  // One sine unit behind a linear layer: out = sin(w*tau + b),
  // loss = (d/dtau out)^2 at a fixed tau.
  const double tau = 0.37;
  auto f = [&](const std::vector<double>& p) {
    const double ddt = std::cos(p[0] * tau + p[1]) * p[0];
    return ddt * ddt;
  };
  std::vector<double> params{1.7, 0.4};
  Tape tape;
  tape.set_params(params);
  LinearSpec spec{0, 1, 1, 1};
  const NodeId t = tape.time_input(tau);
  const NodeId lin = tape.linear(spec, t);
  const NodeId s = tape.sin_span(lin, 1, 1.0);
  const NodeId loss = tape.square(tape.dt_part(s));
  CHECK(tape.value(loss) == doctest::Approx(f(params)).epsilon(1e-13));

  std::vector<double> grad(2, 0.0);
  tape.backward(loss, grad);
  const auto fd = fd_gradient(f, params);
  CHECK(rel_err(grad[0], fd[0]) < 1e-6);
  CHECK(rel_err(grad[1], fd[1]) < 1e-6);
}

TEST_CASE("recorded network evaluation matches the plain forward pass") {
  MlpConfig cfg;
  cfg.hidden_layers = 3;
  cfg.hidden_width = 16;
  cfg.output_dim = 6;
  cfg.omega0 = 12.0;
  cfg.seed = 7;
  const MlpLayout layout = MlpLayout::build(cfg);
  const ParamVector params = init_params(cfg);

  Tape tape;
  tape.set_params(params);
  for (double tau : {0.0, 0.21, 0.73, 1.0}) {
    tape.clear();
    const NodeId out = record_forward(tape, layout, tau);
    const auto jets = forward_with_dt(layout, params, tau);
    const auto vals = forward(layout, params, tau);
    for (NodeId i = 0; i < 6; ++i) {
      CHECK(rel_err(tape.val(out + i).value, vals[i]) < 1e-14);
      CHECK(rel_err(tape.val(out + i).value, jets[i].value) < 1e-14);
      CHECK(rel_err(tape.val(out + i).d_dt, jets[i].d_dt) < 1e-13);
    }
  }
}

TEST_CASE("network parameter gradient matches finite differences") {
  MlpConfig cfg;
  cfg.hidden_layers = 2;
  cfg.hidden_width = 5;
  cfg.output_dim = 2;
  cfg.omega0 = 3.0;
  cfg.seed = 11;
  const MlpLayout layout = MlpLayout::build(cfg);
  ParamVector params = init_params(cfg);
  const double tau = 0.44;

  // mixes value and dt channels of both outputs
  auto f = [&](const std::vector<double>& p) {
    const auto o = forward_with_dt(layout, p, tau);
    return o[0].value * o[0].value + 0.5 * o[1].d_dt * o[1].d_dt +
           o[0].d_dt * o[1].value;
  };

  Tape tape;
  tape.set_params(params);
  const NodeId out = record_forward(tape, layout, tau);
  TapeRef v0{&tape, tape.value_part(out + 0)};
  TapeRef v1{&tape, tape.value_part(out + 1)};
  TapeRef d0{&tape, tape.dt_part(out + 0)};
  TapeRef d1{&tape, tape.dt_part(out + 1)};
  TapeRef loss = v0 * v0 + (d1 * d1) * 0.5 + d0 * v1;
  CHECK(tape.value(loss.id) == doctest::Approx(f(params)).epsilon(1e-12));

  std::vector<double> grad(layout.param_count, 0.0);
  tape.backward(loss.id, grad);
  const auto fd = fd_gradient(f, params, 1e-6);
  for (std::size_t i = 0; i < grad.size(); ++i)
    CHECK(rel_err(grad[i], fd[i]) < 1e-5);
}

TEST_CASE("barrier recorded on tape matches barrier_phi and its gradient") {
  const std::vector<Obstacle> obstacles{{1.0, 0.5, 0.4}, {-0.6, 1.2, 0.7}};
  const BarrierParams bp{0.01, 10.0};
  auto f = [&](const std::vector<double>& p) {
    return barrier_phi(obstacles, bp, p[0], p[1]);
  };
  std::vector<double> params{0.3, -0.2};
  Tape tape;
  tape.set_params(params);
  TapeRef x{&tape, tape.param(0)};
  TapeRef y{&tape, tape.param(1)};
  TapeRef phi = barrier_term(obstacles[0], bp, x, y) +
                barrier_term(obstacles[1], bp, x, y);
  CHECK(tape.value(phi.id) == doctest::Approx(f(params)).epsilon(1e-13));

  std::vector<double> grad(2, 0.0);
  tape.backward(phi.id, grad);
  const Vec2 analytic = barrier_grad(obstacles, bp, params[0], params[1]);
  CHECK(rel_err(grad[0], analytic.x) < 1e-12);
  CHECK(rel_err(grad[1], analytic.y) < 1e-12);
}

TEST_CASE("backward accumulates across repeated calls with seeds") {
  std::vector<double> params{2.0};
  Tape tape;
  tape.set_params(params);
  const NodeId loss = tape.square(tape.param(0));
  std::vector<double> grad(1, 0.0);
  tape.backward(loss, grad, 1.0);
  tape.backward(loss, grad, 0.5);
  CHECK(grad[0] == doctest::Approx(4.0 + 2.0));
}
