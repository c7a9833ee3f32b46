#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "core/dynamics.hpp"
#include "core/environment.hpp"
#include "core/trajectory.hpp"

namespace windplan::rrt {

struct RrtConfig {
  int max_iterations = 20000;
  double dt_segment = 0.4;      // constant-control extension duration [s]
  double goal_tolerance = 0.4;  // goal position acceptance radius [m]
  double goal_bias = 0.1;
  double neighbor_radius = 1.5;   // rewiring neighborhood (state metric)
  int candidates = 16;            // control samples per steer
  double vel_weight = 0.2;        // velocity weight in the state metric
  double rewire_tolerance = 0.1;  // re-steer must land this close
  double safety_buffer = 0.05;    // minimum obstacle clearance [m]
  double sample_vmax = 2.0;       // velocity range of random targets
  double alpha = 0.01;            // energy weight in segment cost
  double gamma = 0.1;             // barrier weight in segment cost
  double sim_dt = 0.01;           // integration step
  std::uint64_t seed = 0;
  int samples = 400;              // rows in the emitted trajectory
  bool check_invariants = false;  // exact bookkeeping checks per insertion

  void validate() const;
};

struct TreeNode {
  State state;
  double time = 0.0;
  int parent = -1;
  Control u_in;           // control driving the incoming segment
  double duration = 0.0;  // incoming segment duration
  double cost = 0.0;      // cost-from-root
  std::vector<int> children;
};

/// Position-plus-weighted-velocity distance used for nearest/neighbor
/// queries and goal-landing tolerance.
double state_distance(const State& a, const State& b, double vel_weight);

/// Integral of alpha*|u|^2 + gamma*Phi over a constant-control segment
/// sampled at sim_dt (trapezoid in the barrier term).
double segment_cost(std::span<const State> states, const Control& u,
                    double sim_dt, const Scenario& sc, const RrtConfig& cfg);

struct SteerResult {
  Control u;
  State end;
  double cost = 0.0;  // segment cost
};

/// Samples candidate constant controls in the box [-u_max, u_max]^2,
/// integrates each for dt_segment, discards candidates that leave the
/// world bounds or dip below the safety buffer, and keeps the one ending
/// nearest the target. Empty when every candidate is rejected.
std::optional<SteerResult> steer(const State& from, double t_from,
                                 const State& target, const Scenario& sc,
                                 const RrtConfig& cfg, std::mt19937_64& rng);

struct RrtStats {
  int iterations = 0;
  int nodes = 0;
  int rewires = 0;
  double best_cost = 0.0;
  // (iteration, cost) at every improvement of the best goal connection.
  std::vector<std::pair<int, double>> improvements;
};

struct RrtPlan {
  TrajectoryRecord trajectory;
  RrtStats stats;
  std::vector<TreeNode> tree;  // final tree, mainly for inspection/tests
};

/// Grows the tree for max_iterations and returns the cheapest recorded
/// goal connection, replayed through the integrator and resampled
/// uniformly. Deterministic for a fixed seed. Throws PlannerError when no
/// node lands within the goal tolerance.
RrtPlan plan(const Scenario& sc, const RrtConfig& cfg);

}  // namespace windplan::rrt
