#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "core/environment.hpp"
#include "core/mlp.hpp"
#include "core/options.hpp"
#include "core/pinn.hpp"
#include "core/planner_astar.hpp"
#include "core/planner_kinorrt.hpp"
#include "core/trajectory.hpp"

namespace windplan {

/// Everything a planner run produces beyond the trajectory itself.
struct PlanResult {
  TrajectoryRecord trajectory;
  std::string log;
  std::optional<pinn::TrainReport> train_report;                       // pinn
  std::optional<std::pair<diff::MlpConfig, diff::ParamVector>> net;    // pinn
};

bool is_known_planner(const std::string& name);

// Config builders: defaults overridden by dotted options; the manifest
// seed feeds the seeded planners unless pinn.seed / an explicit value is
// given.
pinn::TrainConfig pinn_config_from(const Options& o, std::uint64_t seed);
pinn::LossWeights pinn_weights_from(const Options& o);
pinn::CurriculumSchedule pinn_curriculum_from(const Options& o, int epochs);
astar::AstarConfig astar_config_from(const Options& o);
rrt::RrtConfig rrt_config_from(const Options& o, std::uint64_t seed);

using ProgressFn = std::function<void(int done, int total, double loss)>;

/// Runs one planner ("pinn" | "astar" | "kinorrt") on a validated
/// scenario. Throws ConfigError for unknown names/options and
/// PlannerError for planning failures.
PlanResult run_planner(const Scenario& sc, const std::string& planner,
                       std::uint64_t seed, const Options& options,
                       const ProgressFn& progress = {});

}  // namespace windplan
