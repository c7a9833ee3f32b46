#pragma once

#include <span>
#include <string>

#include "core/environment.hpp"
#include "core/metrics.hpp"
#include "core/trajectory.hpp"

namespace windplan::plot {

/// World-space figure: bounds frame, obstacle circles, start/goal markers,
/// one polyline per trajectory, a wind quiver sampled at `wind_time`, and
/// a legend. Trajectories may be empty (scenario-only figure).
std::string trajectories_svg(const Scenario& sc,
                             std::span<const TrajectoryRecord> trajectories,
                             double wind_time = 0.125);

/// Grouped bar chart of the five normalized metrics per planner. Each bar
/// carries its normalized value in a data-value attribute (3 decimals).
std::string comparison_svg(const metrics::Comparison& cmp);

}  // namespace windplan::plot
