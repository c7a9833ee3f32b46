#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "core/environment.hpp"
#include "core/mlp.hpp"
#include "core/trajectory.hpp"

namespace windplan::pinn {

/// Weights of the composite training objective. lambda_* scale the three
/// top-level terms; alpha/beta/gamma weight energy, control smoothness and
/// obstacle proximity inside the objective term. delta is a flight-time
/// penalty reported alongside the objective; with a fixed horizon it has
/// no gradient and is excluded from training.
struct LossWeights {
  double lambda_phys = 1.0;
  double lambda_bc = 10.0;
  double lambda_obj = 0.1;
  double alpha = 0.01;
  double beta = 0.001;
  double gamma = 0.1;
  double delta = 0.0;

  void validate() const;  // all >= 0, lambdas not all zero
};

/// Epoch-indexed multipliers for lambda_phys and lambda_obj: linear ramp
/// from `floor` at epoch 0 up to 1 at `ramp_end_frac * epochs`, then flat.
/// Boundary weighting is never ramped.
struct CurriculumSchedule {
  double floor = 0.1;
  double ramp_end_frac = 0.5;
  int epochs = 1;

  double phys_multiplier(int epoch) const { return multiplier(epoch); }
  double obj_multiplier(int epoch) const { return multiplier(epoch); }

 private:
  double multiplier(int epoch) const;
};

struct TrainConfig {
  int epochs = 6000;
  int collocation_points = 2048;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  int checkpoint_interval = 0;  // 0: never during training
  int quadrature_nodes = 256;   // fixed objective grid
  int threads = 1;
  diff::MlpConfig net;

  void validate() const;
};

struct TrainReport {
  struct EpochRow {
    int epoch;
    double l_phys;  // raw component values (multipliers not applied)
    double l_bc;
    double l_obj;
    double l_total;  // weighted total actually optimized
  };
  std::vector<EpochRow> rows;
  double wall_seconds = 0.0;
  // Effective top-level weights at the final epoch (curriculum applied).
  double final_lambda_phys = 0.0;
  double final_lambda_bc = 0.0;
  double final_lambda_obj = 0.0;
};

/// One evaluation of the six network channels as time jets (d/dtau).
using NetEval = std::array<diff::TimeJet, 6>;
using Evaluator = std::function<NetEval(double tau)>;

/// Dynamics residuals of an evaluation at normalized time tau. Physical
/// time derivatives are (1/T) d/dtau; wind is sampled at the evaluated
/// position and physical time tau*T.
std::array<double, 4> residuals(const NetEval& eval, double tau,
                                const Scenario& scenario);

/// The exact hover solution for a scenario whose start has zero velocity:
/// constant position, controls cancelling the local wind. Residuals vanish
/// identically.
Evaluator hover_evaluator(const Scenario& scenario);

// Loss evaluations (no gradients). The _eval variants accept any
// evaluator; the params variants run the network.
double loss_phys_eval(const Evaluator& eval, const Scenario& scenario,
                      std::span<const double> taus);
double loss_phys(const diff::MlpLayout& layout, std::span<const double> params,
                 const Scenario& scenario, std::span<const double> taus);
double loss_bc(const diff::MlpLayout& layout, std::span<const double> params,
               const Scenario& scenario);
double loss_obj_eval(const Evaluator& eval, const Scenario& scenario,
                     const LossWeights& w, std::span<const double> grid);
double loss_obj(const diff::MlpLayout& layout, std::span<const double> params,
                const Scenario& scenario, const LossWeights& w,
                std::span<const double> grid);

/// Uniform quadrature grid on [0, 1] (trapezoid weights are implied by
/// the uniform spacing).
std::vector<double> uniform_grid(int nodes);

struct LossBreakdown {
  double raw_phys = 0.0, raw_bc = 0.0, raw_obj = 0.0;
  double weighted_phys = 0.0, weighted_bc = 0.0, weighted_obj = 0.0;
  double total = 0.0;  // sum of the weighted components
};

/// Full composite loss at a given epoch (curriculum multipliers applied).
/// The collocation batch must be supplied so the evaluation is
/// reproducible.
LossBreakdown total_loss(const diff::MlpLayout& layout,
                         std::span<const double> params,
                         const Scenario& scenario, const LossWeights& w,
                         const CurriculumSchedule& schedule, int epoch,
                         std::span<const double> taus,
                         std::span<const double> grid);

using ProgressFn = std::function<void(int epoch, int total, double loss)>;
using CheckpointFn =
    std::function<void(int epoch, std::span<const double> params)>;

struct TrainOutput {
  diff::ParamVector params;
  TrainReport report;
};

/// Curriculum-weighted Adam training. Deterministic for a fixed seed and
/// config: collocation batches are drawn from a seeded generator and
/// gradient reduction runs over fixed-size blocks combined in index order,
/// so the result is independent of the thread count. Throws
/// DivergenceError if the loss leaves the finite range.
TrainOutput train(const Scenario& scenario, const TrainConfig& cfg,
                  const LossWeights& weights,
                  const CurriculumSchedule& schedule,
                  const ProgressFn& progress = {},
                  const CheckpointFn& checkpoint = {});

/// Samples the trained network on a uniform n_samples grid, mapping
/// normalized time to physical time t = tau * T.
TrajectoryRecord extract_trajectory(const diff::MlpLayout& layout,
                                    std::span<const double> params,
                                    const Scenario& scenario, int n_samples);

/// Gradient of the composite loss, exposed for verification against
/// finite differences.
std::vector<double> total_loss_gradient(const diff::MlpLayout& layout,
                                        std::span<const double> params,
                                        const Scenario& scenario,
                                        const LossWeights& w,
                                        const CurriculumSchedule& schedule,
                                        int epoch,
                                        std::span<const double> taus,
                                        std::span<const double> grid);

}  // namespace windplan::pinn
