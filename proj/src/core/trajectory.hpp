#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace windplan {

/// Uniformly sampled time series of state and control. The common currency
/// between planners, metrics, CSV export, and plotting.
struct TrajectoryRecord {
  std::string planner;  // source tag, not serialized to CSV
  std::vector<double> t;
  std::vector<double> x, y;
  std::vector<double> vx, vy;
  std::vector<double> ux, uy;

  std::size_t size() const { return t.size(); }

  void reserve(std::size_t n);
  void push_row(double t_, double x_, double y_, double vx_, double vy_,
                double ux_, double uy_);

  /// Throws ConfigError unless: >= 2 samples, strictly increasing t,
  /// all values finite.
  void validate() const;
};

/// Linear interpolation of state columns onto a new uniform grid of
/// n_samples points spanning [t.front(), t.back()]. Controls are taken from
/// the nearest sample at or before each new time (zero-order hold).
TrajectoryRecord resample_uniform(const TrajectoryRecord& tr, int n_samples);

}  // namespace windplan
