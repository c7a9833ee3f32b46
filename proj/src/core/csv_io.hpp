#pragma once

#include <span>
#include <string>
#include <vector>

#include "core/metrics.hpp"
#include "core/pinn.hpp"
#include "core/trajectory.hpp"

namespace windplan::io {

/// Locale-independent float formatting: shortest of 9 significant digits.
std::string format_double(double v);

// Trajectory CSV: mandatory header "t,x,y,vx,vy,ux,uy", one row per
// sample. Writing then loading reproduces the written file byte for byte.
std::string trajectory_to_csv(const TrajectoryRecord& tr);
TrajectoryRecord trajectory_from_csv(const std::string& text);
void write_trajectory_csv(const std::string& path, const TrajectoryRecord& tr);
TrajectoryRecord read_trajectory_csv(const std::string& path);

// Metrics CSV: header "planner,E_ctrl,S_ctrl,L_path,T_flight,d_min",
// one row per planner. Infinite d_min is written as "inf".
std::string metrics_to_csv(std::span<const metrics::MetricsReport> reports);
std::vector<metrics::MetricsReport> metrics_from_csv(const std::string& text);
void write_metrics_csv(const std::string& path,
                       std::span<const metrics::MetricsReport> reports);
std::vector<metrics::MetricsReport> read_metrics_csv(const std::string& path);

// Training report CSV: header "epoch,L_phys,L_bc,L_obj,L_total".
std::string train_report_to_csv(const pinn::TrainReport& report);
void write_train_report_csv(const std::string& path,
                            const pinn::TrainReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace windplan::io
