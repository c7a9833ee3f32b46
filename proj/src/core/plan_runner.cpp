#include "core/plan_runner.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"
#include "core/metrics.hpp"

namespace windplan {

bool is_known_planner(const std::string& name) {
  return name == "pinn" || name == "astar" || name == "kinorrt";
}

pinn::TrainConfig pinn_config_from(const Options& o, std::uint64_t seed) {
  pinn::TrainConfig cfg;
  cfg.epochs = o.get_int("pinn.epochs", 6000);
  cfg.collocation_points = o.get_int("pinn.collocation_points", 2048);
  cfg.learning_rate = o.get_double("pinn.learning_rate", 1e-3);
  cfg.seed = o.get_u64("pinn.seed", seed);
  cfg.checkpoint_interval = o.get_int("pinn.checkpoint_interval", 0);
  cfg.quadrature_nodes = o.get_int("pinn.quadrature_nodes", 256);
  cfg.threads = o.get_int("pinn.threads", 1);
  cfg.net.hidden_layers = o.get_int("pinn.hidden_layers", 4);
  cfg.net.hidden_width = o.get_int("pinn.hidden_width", 64);
  cfg.net.omega0 = o.get_double("pinn.omega0", 30.0);
  cfg.net.seed = cfg.seed;
  const std::string init = o.get_string("pinn.init", "xavier");
  if (init == "xavier")
    cfg.net.init = diff::MlpConfig::Init::kXavier;
  else if (init == "siren")
    cfg.net.init = diff::MlpConfig::Init::kSiren;
  else
    throw ConfigError("pinn.init must be 'xavier' or 'siren'");
  return cfg;
}

pinn::LossWeights pinn_weights_from(const Options& o) {
  pinn::LossWeights w;
  w.lambda_phys = o.get_double("pinn.lambda_phys", 1.0);
  w.lambda_bc = o.get_double("pinn.lambda_bc", 10.0);
  w.lambda_obj = o.get_double("pinn.lambda_obj", 0.1);
  w.alpha = o.get_double("pinn.alpha", 0.01);
  w.beta = o.get_double("pinn.beta", 0.001);
  w.gamma = o.get_double("pinn.gamma", 0.1);
  w.delta = o.get_double("pinn.delta", 0.0);
  return w;
}

pinn::CurriculumSchedule pinn_curriculum_from(const Options& o, int epochs) {
  pinn::CurriculumSchedule s;
  s.floor = o.get_double("pinn.curriculum_floor", 0.1);
  s.ramp_end_frac = o.get_double("pinn.curriculum_end_frac", 0.5);
  s.epochs = epochs;
  return s;
}

astar::AstarConfig astar_config_from(const Options& o) {
  astar::AstarConfig cfg;
  cfg.cell = o.get_double("astar.cell", 0.25);
  cfg.v_ref = o.get_double("astar.v_ref", 1.5);
  cfg.alpha = o.get_double("astar.alpha", 0.01);
  cfg.gamma = o.get_double("astar.gamma", 0.1);
  cfg.samples = o.get_int("astar.samples", 400);
  cfg.max_densify = o.get_int("astar.max_densify", 5);
  return cfg;
}

rrt::RrtConfig rrt_config_from(const Options& o, std::uint64_t seed) {
  rrt::RrtConfig cfg;
  cfg.max_iterations = o.get_int("rrt.max_iterations", 20000);
  cfg.dt_segment = o.get_double("rrt.dt_segment", 0.4);
  cfg.goal_tolerance = o.get_double("rrt.goal_tolerance", 0.4);
  cfg.goal_bias = o.get_double("rrt.goal_bias", 0.1);
  cfg.neighbor_radius = o.get_double("rrt.neighbor_radius", 1.5);
  cfg.candidates = o.get_int("rrt.candidates", 16);
  cfg.vel_weight = o.get_double("rrt.vel_weight", 0.2);
  cfg.rewire_tolerance = o.get_double("rrt.rewire_tolerance", 0.1);
  cfg.safety_buffer = o.get_double("rrt.safety_buffer", 0.05);
  cfg.sample_vmax = o.get_double("rrt.sample_vmax", 2.0);
  cfg.alpha = o.get_double("rrt.alpha", 0.01);
  cfg.gamma = o.get_double("rrt.gamma", 0.1);
  cfg.sim_dt = o.get_double("rrt.sim_dt", 0.01);
  cfg.seed = seed;
  cfg.samples = o.get_int("rrt.samples", 400);
  return cfg;
}

namespace {

int count_u_violations(const TrajectoryRecord& tr, double u_max) {
  int n = 0;
  for (std::size_t i = 0; i < tr.size(); ++i)
    if (std::max(std::fabs(tr.ux[i]), std::fabs(tr.uy[i])) > u_max) ++n;
  return n;
}

PlanResult run_pinn(const Scenario& sc, std::uint64_t seed, const Options& o,
                    const ProgressFn& progress) {
  const pinn::TrainConfig cfg = pinn_config_from(o, seed);
  const pinn::LossWeights w = pinn_weights_from(o);
  const pinn::CurriculumSchedule schedule =
      pinn_curriculum_from(o, cfg.epochs);

  pinn::TrainOutput out = pinn::train(
      sc, cfg, w, schedule,
      progress ? pinn::ProgressFn([&](int e, int total, double loss) {
        progress(e + 1, total, loss);
      })
               : pinn::ProgressFn{});

  const diff::MlpLayout layout = diff::MlpLayout::build(cfg.net);
  const int samples = o.get_int("pinn.samples", 400);
  PlanResult res;
  res.trajectory = pinn::extract_trajectory(layout, out.params, sc, samples);

  // Post-hoc diagnostics for the log.
  const auto eval_grid = pinn::uniform_grid(512);
  const double ms_residual =
      pinn::loss_phys(layout, out.params, sc, eval_grid);
  const double e0 = std::hypot(res.trajectory.x.front() - sc.start.x,
                               res.trajectory.y.front() - sc.start.y);
  const double e1 = std::hypot(res.trajectory.x.back() - sc.goal.x,
                               res.trajectory.y.back() - sc.goal.y);
  const int uviol = count_u_violations(res.trajectory, sc.u_max);
  const double obj =
      pinn::loss_obj(layout, out.params, sc, w, pinn::uniform_grid(512));

  std::ostringstream log;
  const auto& rows = out.report.rows;
  log << "planner: pinn\nscenario: " << sc.name << "\nseed: " << cfg.seed
      << "\nepochs: " << cfg.epochs
      << "\ncollocation_points: " << cfg.collocation_points
      << "\nlearning_rate: " << cfg.learning_rate
      << "\nnetwork: " << cfg.net.hidden_layers << "x" << cfg.net.hidden_width
      << " omega0=" << cfg.net.omega0 << "\n";
  log << "initial: L_phys=" << rows.front().l_phys
      << " L_bc=" << rows.front().l_bc << " L_obj=" << rows.front().l_obj
      << " L_total=" << rows.front().l_total << "\n";
  log << "final:   L_phys=" << rows.back().l_phys
      << " L_bc=" << rows.back().l_bc << " L_obj=" << rows.back().l_obj
      << " L_total=" << rows.back().l_total << "\n";
  log << "endpoint position error: start=" << e0 << " m, goal=" << e1
      << " m\n";
  log << "mean-square dynamics residual (512-node grid): " << ms_residual
      << "\n";
  log << "objective integral: " << obj << " (+ flight-time term delta*T="
      << w.delta * sc.horizon_T << ", delta=" << w.delta << ")\n";
  log << "samples with max(|ux|,|uy|) > u_max: " << uviol << " of "
      << res.trajectory.size() << "\n";
  log << "wall_seconds: " << out.report.wall_seconds << "\n";

  res.log = log.str();
  res.train_report = std::move(out.report);
  res.net = std::make_pair(cfg.net, std::move(out.params));
  return res;
}

PlanResult run_astar(const Scenario& sc, const Options& o) {
  const astar::AstarConfig cfg = astar_config_from(o);
  astar::AstarPlan plan = astar::plan(sc, cfg);

  PlanResult res;
  res.trajectory = std::move(plan.trajectory);
  std::ostringstream log;
  const astar::GridSpec grid = astar::GridSpec::make(sc.bounds, cfg.cell);
  log << "planner: astar\nscenario: " << sc.name << "\ngrid: " << grid.nx
      << "x" << grid.ny << " cells of " << cfg.cell << " m\n";
  log << "expanded: " << plan.search.expanded << "\n";
  log << "path: " << plan.search.path.waypoints.size()
      << " waypoints, polyline length "
      << plan.search.path.polyline_length() << " m, cost "
      << plan.search.cost << "\n";
  log << "densify rounds: " << plan.densify_rounds << "\n";
  log << "samples with max(|ux|,|uy|) > u_max: " << plan.u_max_violations
      << " of " << res.trajectory.size()
      << " (controls stay unclamped to keep the record dynamics-consistent)\n";
  res.log = log.str();
  return res;
}

PlanResult run_kinorrt(const Scenario& sc, std::uint64_t seed,
                       const Options& o) {
  const rrt::RrtConfig cfg = rrt_config_from(o, seed);
  rrt::RrtPlan plan = rrt::plan(sc, cfg);

  PlanResult res;
  res.trajectory = std::move(plan.trajectory);
  std::ostringstream log;
  log << "planner: kinorrt\nscenario: " << sc.name << "\nseed: " << cfg.seed
      << "\niterations: " << plan.stats.iterations
      << "\nnodes: " << plan.stats.nodes << "\nrewires: " << plan.stats.rewires
      << "\nbest segment-cost: " << plan.stats.best_cost
      << "\nimprovements: " << plan.stats.improvements.size() << "\n";
  res.log = log.str();
  return res;
}

}  // namespace

PlanResult run_planner(const Scenario& sc, const std::string& planner,
                       std::uint64_t seed, const Options& options,
                       const ProgressFn& progress) {
  sc.validate();
  if (planner == "pinn") return run_pinn(sc, seed, options, progress);
  if (planner == "astar") return run_astar(sc, options);
  if (planner == "kinorrt") return run_kinorrt(sc, seed, options);
  throw ConfigError("unknown planner '" + planner +
                    "' (expected pinn, astar, or kinorrt)");
}

}  // namespace windplan
