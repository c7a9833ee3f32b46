#include "core/pinn.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "core/adam.hpp"
#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/tape.hpp"

namespace windplan::pinn {

using diff::MlpLayout;
using diff::NodeId;
using diff::Tape;
using diff::TapeRef;
using diff::TimeJet;

namespace {

// Gradient reduction runs over blocks of this many collocation/quadrature
// points, combined in block order, so results do not depend on how many
// threads execute the blocks.
constexpr int kReductionBlock = 256;

TapeRef ref(Tape& t, NodeId id) { return {&t, id}; }

/// Trapezoid weight of node i on a uniform grid of n nodes over [0, 1].
double trap_weight(int i, int n) {
  const double d = 1.0 / (n - 1);
  return (i == 0 || i == n - 1) ? 0.5 * d : d;
}

NodeId record_phys_point(Tape& tape, const MlpLayout& layout,
                         const Scenario& sc, double tau) {
  const double T = sc.horizon_T;
  const NodeId out = record_forward(tape, layout, tau);
  const TapeRef x = ref(tape, tape.value_part(out + 0));
  const TapeRef y = ref(tape, tape.value_part(out + 1));
  const TapeRef vx = ref(tape, tape.value_part(out + 2));
  const TapeRef vy = ref(tape, tape.value_part(out + 3));
  const TapeRef ux = ref(tape, tape.value_part(out + 4));
  const TapeRef uy = ref(tape, tape.value_part(out + 5));
  const TapeRef xd = ref(tape, tape.dt_part(out + 0)) * (1.0 / T);
  const TapeRef yd = ref(tape, tape.dt_part(out + 1)) * (1.0 / T);
  const TapeRef vxd = ref(tape, tape.dt_part(out + 2)) * (1.0 / T);
  const TapeRef vyd = ref(tape, tape.dt_part(out + 3)) * (1.0 / T);

  const WindVec<TapeRef> w = wind_at(sc.dynamics.wind, x, y, tau * T);
  const double cd = sc.dynamics.c_d;

  const TapeRef r1 = xd - vx;
  const TapeRef r2 = yd - vy;
  const TapeRef r3 = vxd - ux + vx * cd - w.x;
  const TapeRef r4 = vyd - uy + vy * cd - w.y;

  NodeId loss = tape.add(tape.square(r1.id), tape.square(r2.id));
  loss = tape.add(loss, tape.square(r3.id));
  loss = tape.add(loss, tape.square(r4.id));
  return loss;
}

NodeId record_bc_loss(Tape& tape, const MlpLayout& layout,
                      const Scenario& sc) {
  auto endpoint = [&](double tau, const State& target) {
    const NodeId out = record_forward(tape, layout, tau);
    const double tgt[4] = {target.x, target.y, target.vx, target.vy};
    NodeId sum = 0;
    for (int i = 0; i < 4; ++i) {
      const NodeId err =
          tape.shift(tape.value_part(out + static_cast<NodeId>(i)), -tgt[i]);
      const NodeId sq = tape.square(err);
      sum = (i == 0) ? sq : tape.add(sum, sq);
    }
    return sum;
  };
  const NodeId at_start = endpoint(0.0, sc.start);
  const NodeId at_goal = endpoint(1.0, sc.goal);
  return tape.add(at_start, at_goal);
}

/// Objective integrand alpha*|u|^2 + beta*|du/dtau|^2 + gamma*Phi(x, y)
/// at one quadrature node (normalized-time derivatives throughout).
NodeId record_obj_point(Tape& tape, const MlpLayout& layout,
                        const Scenario& sc, const LossWeights& w, double tau) {
  const NodeId out = record_forward(tape, layout, tau);
  const TapeRef ux = ref(tape, tape.value_part(out + 4));
  const TapeRef uy = ref(tape, tape.value_part(out + 5));
  const TapeRef uxd = ref(tape, tape.dt_part(out + 4));
  const TapeRef uyd = ref(tape, tape.dt_part(out + 5));

  NodeId total = tape.scale(
      tape.add(tape.square(ux.id), tape.square(uy.id)), w.alpha);
  total = tape.add(total, tape.scale(tape.add(tape.square(uxd.id),
                                              tape.square(uyd.id)),
                                     w.beta));
  if (!sc.obstacles.empty() && w.gamma != 0.0) {
    const TapeRef x = ref(tape, tape.value_part(out + 0));
    const TapeRef y = ref(tape, tape.value_part(out + 1));
    TapeRef phi = barrier_term(sc.obstacles[0], sc.barrier, x, y);
    for (std::size_t i = 1; i < sc.obstacles.size(); ++i)
      phi = phi + barrier_term(sc.obstacles[i], sc.barrier, x, y);
    total = tape.add(total, tape.scale(phi.id, w.gamma));
  }
  return total;
}

Evaluator mlp_evaluator(const MlpLayout& layout,
                        std::span<const double> params) {
  return [&layout, params](double tau) {
    const std::vector<TimeJet> o = forward_with_dt(layout, params, tau);
    NetEval e;
    std::copy_n(o.begin(), 6, e.begin());
    return e;
  };
}

void require_six_outputs(const MlpLayout& layout) {
  if (layout.layers.back().lin.fan_out != 6)
    throw ConfigError("pinn: network must have 6 output channels");
}

/// Shared loss/gradient evaluation over fixed-size reduction blocks,
/// optionally spread across threads.
class LossEngine {
 public:
  LossEngine(const MlpLayout& layout, const Scenario& sc,
             const LossWeights& w, std::vector<double> grid, int n_colloc,
             int threads)
      : layout_(layout),
        sc_(sc),
        w_(w),
        grid_(std::move(grid)),
        n_colloc_(n_colloc),
        threads_(std::max(1, threads)) {
    const int phys_blocks = (n_colloc_ + kReductionBlock - 1) / kReductionBlock;
    const int grid_n = static_cast<int>(grid_.size());
    const int obj_blocks = (grid_n + kReductionBlock - 1) / kReductionBlock;
    for (int b = 0; b < phys_blocks; ++b)
      jobs_.push_back({JobKind::kPhys, b * kReductionBlock,
                       std::min(n_colloc_, (b + 1) * kReductionBlock)});
    for (int b = 0; b < obj_blocks; ++b)
      jobs_.push_back({JobKind::kObj, b * kReductionBlock,
                       std::min(grid_n, (b + 1) * kReductionBlock)});
    jobs_.push_back({JobKind::kBc, 0, 0});
    for (auto& j : jobs_) j.grad.assign(layout_.param_count, 0.0);
    tapes_.resize(static_cast<std::size_t>(threads_));
  }

  struct Result {
    double raw_phys = 0.0, raw_bc = 0.0, raw_obj = 0.0;
  };

  Result evaluate(std::span<const double> params,
                  std::span<const double> taus, std::span<double> g_phys,
                  std::span<double> g_bc, std::span<double> g_obj) {
    run_jobs(params, taus);
    Result r;
    std::fill(g_phys.begin(), g_phys.end(), 0.0);
    std::fill(g_bc.begin(), g_bc.end(), 0.0);
    std::fill(g_obj.begin(), g_obj.end(), 0.0);
    const double inv_n = 1.0 / n_colloc_;
    for (const Job& j : jobs_) {  // fixed combination order
      switch (j.kind) {
        case JobKind::kPhys: {
          r.raw_phys += j.loss_sum * inv_n;
          for (std::size_t k = 0; k < g_phys.size(); ++k)
            g_phys[k] += j.grad[k];
          break;
        }
        case JobKind::kObj: {
          r.raw_obj += j.loss_sum;
          for (std::size_t k = 0; k < g_obj.size(); ++k) g_obj[k] += j.grad[k];
          break;
        }
        case JobKind::kBc: {
          r.raw_bc = j.loss_sum;
          for (std::size_t k = 0; k < g_bc.size(); ++k) g_bc[k] += j.grad[k];
          break;
        }
      }
    }
    return r;
  }

 private:
  enum class JobKind { kPhys, kObj, kBc };
  struct Job {
    JobKind kind;
    int begin, end;
    double loss_sum = 0.0;
    std::vector<double> grad;
  };

  void run_one(Tape& tape, Job& job, std::span<const double> params,
               std::span<const double> taus) {
    job.loss_sum = 0.0;
    std::fill(job.grad.begin(), job.grad.end(), 0.0);
    tape.set_params(params);
    const double inv_n = 1.0 / n_colloc_;
    switch (job.kind) {
      case JobKind::kPhys: {
        for (int i = job.begin; i < job.end; ++i) {
          tape.clear();
          const NodeId loss = record_phys_point(tape, layout_, sc_, taus[i]);
          job.loss_sum += tape.value(loss);
          tape.backward(loss, job.grad, inv_n);
        }
        break;
      }
      case JobKind::kObj: {
        const int n = static_cast<int>(grid_.size());
        for (int i = job.begin; i < job.end; ++i) {
          tape.clear();
          const NodeId node =
              record_obj_point(tape, layout_, sc_, w_, grid_[i]);
          const double wq = trap_weight(i, n);
          job.loss_sum += wq * tape.value(node);
          tape.backward(node, job.grad, wq);
        }
        break;
      }
      case JobKind::kBc: {
        tape.clear();
        const NodeId node = record_bc_loss(tape, layout_, sc_);
        job.loss_sum = tape.value(node);
        tape.backward(node, job.grad, 1.0);
        break;
      }
    }
  }

  void run_jobs(std::span<const double> params, std::span<const double> taus) {
    if (threads_ == 1) {
      for (Job& j : jobs_) run_one(tapes_[0], j, params, taus);
      return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&](int tid) {
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= jobs_.size()) return;
        run_one(tapes_[static_cast<std::size_t>(tid)], jobs_[k], params, taus);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads_ - 1));
    for (int t = 1; t < threads_; ++t) pool.emplace_back(worker, t);
    worker(0);
    for (auto& th : pool) th.join();
  }

  const MlpLayout& layout_;
  const Scenario& sc_;
  LossWeights w_;
  std::vector<double> grid_;
  int n_colloc_;
  int threads_;
  std::vector<Job> jobs_;
  std::vector<Tape> tapes_;
};

}  // namespace

void LossWeights::validate() const {
  const double vals[] = {lambda_phys, lambda_bc, lambda_obj,
                         alpha,       beta,      gamma};
  for (double v : vals)
    if (!(v >= 0.0)) throw ConfigError("loss weights must be >= 0");
  if (lambda_phys == 0.0 && lambda_bc == 0.0 && lambda_obj == 0.0)
    throw ConfigError("loss weights: lambdas must not all be zero");
}

double CurriculumSchedule::multiplier(int epoch) const {
  const double ramp_end = ramp_end_frac * epochs;
  if (!(ramp_end > 0.0)) return 1.0;
  const double frac = std::min(1.0, static_cast<double>(epoch) / ramp_end);
  return floor + (1.0 - floor) * frac;
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
  if (collocation_points < 2)
    throw ConfigError("train: collocation_points must be >= 2");
  if (!(learning_rate > 0.0)) throw ConfigError("train: learning_rate must be > 0");
  if (quadrature_nodes < 2)
    throw ConfigError("train: quadrature_nodes must be >= 2");
  if (threads < 1) throw ConfigError("train: threads must be >= 1");
  if (checkpoint_interval < 0)
    throw ConfigError("train: checkpoint_interval must be >= 0");
  net.validate();
  if (net.output_dim != 6)
    throw ConfigError("train: network output_dim must be 6");
}

std::array<double, 4> residuals(const NetEval& o, double tau,
                                const Scenario& sc) {
  const double T = sc.horizon_T;
  const double cd = sc.dynamics.c_d;
  const WindVec<double> w =
      wind_at(sc.dynamics.wind, o[0].value, o[1].value, tau * T);
  return {
      o[0].d_dt / T - o[2].value,
      o[1].d_dt / T - o[3].value,
      o[2].d_dt / T - (o[4].value - cd * o[2].value + w.x),
      o[3].d_dt / T - (o[5].value - cd * o[3].value + w.y),
  };
}

Evaluator hover_evaluator(const Scenario& sc) {
  const double x0 = sc.start.x;
  const double y0 = sc.start.y;
  const WindParams wind = sc.dynamics.wind;
  const double T = sc.horizon_T;
  return [x0, y0, wind, T](double tau) {
    constexpr double kPi = 3.14159265358979323846;
    const double t = tau * T;
    const WindVec<double> w = wind_at(wind, x0, y0, t);
    // d/dtau of the wind at the fixed hover position.
    const double phase = 2.0 * kPi * (t - std::floor(t));
    const double dwx = wind.A_x * std::sin(kPi * y0 / wind.L_y) *
                       (-2.0 * kPi * std::sin(phase)) * T;
    const double dwy = wind.A_y * std::sin(kPi * x0 / wind.L_x) *
                       (2.0 * kPi * std::cos(phase)) * T;
    NetEval e;
    e[0] = {x0, 0.0};
    e[1] = {y0, 0.0};
    e[2] = {0.0, 0.0};
    e[3] = {0.0, 0.0};
    e[4] = {-w.x, -dwx};
    e[5] = {-w.y, -dwy};
    return e;
  };
}

double loss_phys_eval(const Evaluator& eval, const Scenario& sc,
                      std::span<const double> taus) {
  if (taus.empty()) throw ConfigError("loss_phys: empty collocation batch");
  double sum = 0.0;
  for (double tau : taus) {
    const auto r = residuals(eval(tau), tau, sc);
    sum += r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3];
  }
  return sum / static_cast<double>(taus.size());
}

double loss_phys(const MlpLayout& layout, std::span<const double> params,
                 const Scenario& sc, std::span<const double> taus) {
  require_six_outputs(layout);
  return loss_phys_eval(mlp_evaluator(layout, params), sc, taus);
}

double loss_bc(const MlpLayout& layout, std::span<const double> params,
               const Scenario& sc) {
  require_six_outputs(layout);
  double sum = 0.0;
  auto accumulate = [&](double tau, const State& target) {
    const std::vector<double> o = forward(layout, params, tau);
    const double tgt[4] = {target.x, target.y, target.vx, target.vy};
    for (int i = 0; i < 4; ++i) sum += square(o[i] - tgt[i]);
  };
  accumulate(0.0, sc.start);
  accumulate(1.0, sc.goal);
  return sum;
}

double loss_obj_eval(const Evaluator& eval, const Scenario& sc,
                     const LossWeights& w, std::span<const double> grid) {
  if (grid.size() < 2) throw ConfigError("loss_obj: grid needs >= 2 nodes");
  const int n = static_cast<int>(grid.size());
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const NetEval o = eval(grid[i]);
    double f = w.alpha * (square(o[4].value) + square(o[5].value)) +
               w.beta * (square(o[4].d_dt) + square(o[5].d_dt));
    if (!sc.obstacles.empty() && w.gamma != 0.0)
      f += w.gamma *
           barrier_phi(sc.obstacles, sc.barrier, o[0].value, o[1].value);
    sum += trap_weight(i, n) * f;
  }
  return sum;
}

double loss_obj(const MlpLayout& layout, std::span<const double> params,
                const Scenario& sc, const LossWeights& w,
                std::span<const double> grid) {
  require_six_outputs(layout);
  return loss_obj_eval(mlp_evaluator(layout, params), sc, w, grid);
}

std::vector<double> uniform_grid(int nodes) {
  if (nodes < 2) throw ConfigError("uniform_grid: need >= 2 nodes");
  std::vector<double> g(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i)
    g[static_cast<std::size_t>(i)] = static_cast<double>(i) / (nodes - 1);
  return g;
}

LossBreakdown total_loss(const MlpLayout& layout,
                         std::span<const double> params, const Scenario& sc,
                         const LossWeights& w,
                         const CurriculumSchedule& schedule, int epoch,
                         std::span<const double> taus,
                         std::span<const double> grid) {
  LossBreakdown b;
  b.raw_phys = loss_phys(layout, params, sc, taus);
  b.raw_bc = loss_bc(layout, params, sc);
  b.raw_obj = loss_obj(layout, params, sc, w, grid);
  b.weighted_phys = w.lambda_phys * schedule.phys_multiplier(epoch) * b.raw_phys;
  b.weighted_bc = w.lambda_bc * b.raw_bc;
  b.weighted_obj = w.lambda_obj * schedule.obj_multiplier(epoch) * b.raw_obj;
  b.total = b.weighted_phys + b.weighted_bc + b.weighted_obj;
  return b;
}

std::vector<double> total_loss_gradient(
    const MlpLayout& layout, std::span<const double> params,
    const Scenario& sc, const LossWeights& w,
    const CurriculumSchedule& schedule, int epoch,
    std::span<const double> taus, std::span<const double> grid) {
  require_six_outputs(layout);
  LossEngine engine(layout, sc, w, std::vector<double>(grid.begin(), grid.end()),
                    static_cast<int>(taus.size()), 1);
  std::vector<double> g_phys(layout.param_count), g_bc(layout.param_count),
      g_obj(layout.param_count);
  engine.evaluate(params, taus, g_phys, g_bc, g_obj);
  const double mp = w.lambda_phys * schedule.phys_multiplier(epoch);
  const double mb = w.lambda_bc;
  const double mo = w.lambda_obj * schedule.obj_multiplier(epoch);
  std::vector<double> g(layout.param_count);
  for (std::size_t k = 0; k < g.size(); ++k)
    g[k] = mp * g_phys[k] + mb * g_bc[k] + mo * g_obj[k];
  return g;
}

TrainOutput train(const Scenario& sc, const TrainConfig& cfg,
                  const LossWeights& weights,
                  const CurriculumSchedule& schedule, const ProgressFn& progress,
                  const CheckpointFn& checkpoint) {
  sc.validate();
  cfg.validate();
  weights.validate();

  const auto t_begin = std::chrono::steady_clock::now();
  const MlpLayout layout = MlpLayout::build(cfg.net);
  diff::ParamVector params = diff::init_params(cfg.net);
  diff::AdamState adam = diff::AdamState::init(
      layout.param_count, {cfg.learning_rate, 0.9, 0.999, 1e-8});

  // Distinct stream from the init draws so batch sampling does not depend
  // on the network size.
  std::mt19937_64 batch_rng(cfg.seed + 1);

  LossEngine engine(layout, sc, weights, uniform_grid(cfg.quadrature_nodes),
                    cfg.collocation_points, cfg.threads);
  std::vector<double> taus(static_cast<std::size_t>(cfg.collocation_points));
  std::vector<double> g_phys(layout.param_count), g_bc(layout.param_count),
      g_obj(layout.param_count), g_total(layout.param_count);

  TrainReport report;
  report.rows.reserve(static_cast<std::size_t>(cfg.epochs));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (double& t : taus) t = uniform01(batch_rng);

    const auto r = engine.evaluate(params, taus, g_phys, g_bc, g_obj);
    const double mp = weights.lambda_phys * schedule.phys_multiplier(epoch);
    const double mb = weights.lambda_bc;
    const double mo = weights.lambda_obj * schedule.obj_multiplier(epoch);
    const double l_total = mp * r.raw_phys + mb * r.raw_bc + mo * r.raw_obj;
    if (!std::isfinite(l_total))
      throw DivergenceError("train: loss diverged at epoch " +
                            std::to_string(epoch));

    for (std::size_t k = 0; k < g_total.size(); ++k)
      g_total[k] = mp * g_phys[k] + mb * g_bc[k] + mo * g_obj[k];
    diff::adam_step(adam, params, g_total);

    report.rows.push_back({epoch, r.raw_phys, r.raw_bc, r.raw_obj, l_total});
    if (progress) progress(epoch, cfg.epochs, l_total);
    if (checkpoint && cfg.checkpoint_interval > 0 &&
        (epoch + 1) % cfg.checkpoint_interval == 0)
      checkpoint(epoch + 1, params);

    if (epoch == cfg.epochs - 1) {
      report.final_lambda_phys = mp;
      report.final_lambda_bc = mb;
      report.final_lambda_obj = mo;
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin)
          .count();
  return {std::move(params), std::move(report)};
}

TrajectoryRecord extract_trajectory(const MlpLayout& layout,
                                    std::span<const double> params,
                                    const Scenario& sc, int n_samples) {
  require_six_outputs(layout);
  if (n_samples < 2)
    throw ConfigError("extract_trajectory: n_samples must be >= 2");
  TrajectoryRecord tr;
  tr.planner = "pinn";
  tr.reserve(static_cast<std::size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k) {
    const double tau = static_cast<double>(k) / (n_samples - 1);
    const std::vector<double> o = forward(layout, params, tau);
    tr.push_row(tau * sc.horizon_T, o[0], o[1], o[2], o[3], o[4], o[5]);
  }
  return tr;
}

}  // namespace windplan::pinn
