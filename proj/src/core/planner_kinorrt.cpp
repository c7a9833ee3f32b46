#include "core/planner_kinorrt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace windplan::rrt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Segment {
  std::vector<State> states;  // includes both endpoints, spaced sim_dt
  State end;
  double cost = 0.0;
};

/// Integrates one constant-control segment, rejecting it the moment a
/// substep leaves the bounds or violates the safety buffer.
std::optional<Segment> integrate_segment(const State& from, double t_from,
                                         const Control& u, const Scenario& sc,
                                         const RrtConfig& cfg) {
  const long steps = std::lround(cfg.dt_segment / cfg.sim_dt);
  Segment seg;
  seg.states.reserve(static_cast<std::size_t>(steps) + 1);
  seg.states.push_back(from);
  State s = from;
  for (long k = 0; k < steps; ++k) {
    s = rk4_step(s, u, t_from + k * cfg.sim_dt, cfg.sim_dt, sc.dynamics);
    if (!s.finite()) return std::nullopt;
    if (!sc.bounds.contains(s.x, s.y)) return std::nullopt;
    for (const Obstacle& o : sc.obstacles)
      if (signed_distance(o, s.x, s.y) <= cfg.safety_buffer)
        return std::nullopt;
    seg.states.push_back(s);
  }
  seg.end = s;
  seg.cost = segment_cost(seg.states, u, cfg.sim_dt, sc, cfg);
  return seg;
}

}  // namespace

void RrtConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("rrt: max_iterations must be >= 1");
  if (!(dt_segment > 0.0)) throw ConfigError("rrt: dt_segment must be > 0");
  if (!(goal_tolerance > 0.0))
    throw ConfigError("rrt: goal_tolerance must be > 0");
  if (goal_bias < 0.0 || goal_bias > 1.0)
    throw ConfigError("rrt: goal_bias must be in [0, 1]");
  if (!(neighbor_radius > 0.0))
    throw ConfigError("rrt: neighbor_radius must be > 0");
  if (candidates < 1) throw ConfigError("rrt: candidates must be >= 1");
  if (!(sim_dt > 0.0)) throw ConfigError("rrt: sim_dt must be > 0");
  if (samples < 2) throw ConfigError("rrt: samples must be >= 2");
  const long steps = std::lround(dt_segment / sim_dt);
  if (steps < 1 || std::fabs(steps * sim_dt - dt_segment) > 1e-9)
    throw ConfigError("rrt: dt_segment must be a multiple of sim_dt");
}

double state_distance(const State& a, const State& b, double vel_weight) {
  return std::hypot(a.x - b.x, a.y - b.y) +
         vel_weight * std::hypot(a.vx - b.vx, a.vy - b.vy);
}

double segment_cost(std::span<const State> states, const Control& u,
                    double sim_dt, const Scenario& sc, const RrtConfig& cfg) {
  if (states.size() < 2) return 0.0;
  const double duration = sim_dt * static_cast<double>(states.size() - 1);
  double cost = cfg.alpha * (u.ux * u.ux + u.uy * u.uy) * duration;
  if (!sc.obstacles.empty() && cfg.gamma != 0.0) {
    double phi_int = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const double phi =
          barrier_phi(sc.obstacles, sc.barrier, states[i].x, states[i].y);
      const bool edge_node = (i == 0 || i + 1 == states.size());
      phi_int += (edge_node ? 0.5 : 1.0) * phi;
    }
    cost += cfg.gamma * phi_int * sim_dt;
  }
  return cost;
}

std::optional<SteerResult> steer(const State& from, double t_from,
                                 const State& target, const Scenario& sc,
                                 const RrtConfig& cfg, std::mt19937_64& rng) {
  std::optional<SteerResult> best;
  double best_dist = kInf;
  for (int c = 0; c < cfg.candidates; ++c) {
    Control u{uniform_range(rng, -sc.u_max, sc.u_max),
              uniform_range(rng, -sc.u_max, sc.u_max)};
    const auto seg = integrate_segment(from, t_from, u, sc, cfg);
    if (!seg) continue;
    const double d = state_distance(seg->end, target, cfg.vel_weight);
    if (d < best_dist) {
      best_dist = d;
      best = SteerResult{u, seg->end, seg->cost};
    }
  }
  return best;
}

namespace {

class Planner {
 public:
  Planner(const Scenario& sc, const RrtConfig& cfg)
      : sc_(sc), cfg_(cfg), rng_(cfg.seed) {}

  RrtPlan run() {
    TreeNode root;
    root.state = sc_.start;
    nodes_.push_back(root);
    try_goal(0);

    for (int iter = 0; iter < cfg_.max_iterations; ++iter) {
      const State target = sample_target();
      const int near = nearest(target);
      auto cand = steer(nodes_[static_cast<std::size_t>(near)].state,
                        nodes_[static_cast<std::size_t>(near)].time, target,
                        sc_, cfg_, rng_);
      if (!cand) continue;

      const int idx = static_cast<int>(nodes_.size());
      TreeNode n;
      n.state = cand->end;
      n.time = nodes_[static_cast<std::size_t>(near)].time + cfg_.dt_segment;
      n.parent = near;
      n.u_in = {cand->u.ux, cand->u.uy};
      n.duration = cfg_.dt_segment;
      n.cost = nodes_[static_cast<std::size_t>(near)].cost + cand->cost;
      nodes_.push_back(std::move(n));
      nodes_[static_cast<std::size_t>(near)].children.push_back(idx);

      rewire_through(idx, iter);
      try_goal(idx, iter);
      if (cfg_.check_invariants) verify_tree();
    }

    if (!(best_cost_ < kInf))
      throw PlannerError("rrt: no goal connection within " +
                         std::to_string(cfg_.max_iterations) + " iterations");

    TrajectoryRecord fine = simulate(sc_.start, best_schedule_, sc_.dynamics,
                                     cfg_.sim_dt);
    RrtPlan plan;
    plan.trajectory = resample_uniform(fine, cfg_.samples);
    plan.trajectory.planner = "kinorrt";
    plan.stats.iterations = cfg_.max_iterations;
    plan.stats.nodes = static_cast<int>(nodes_.size());
    plan.stats.rewires = rewires_;
    plan.stats.best_cost = best_cost_;
    plan.stats.improvements = std::move(improvements_);
    plan.tree = std::move(nodes_);
    return plan;
  }

 private:
  State sample_target() {
    // Consume draws in a fixed order regardless of the branch taken.
    const double pick = uniform01(rng_);
    const double rx = uniform_range(rng_, sc_.bounds.xmin, sc_.bounds.xmax);
    const double ry = uniform_range(rng_, sc_.bounds.ymin, sc_.bounds.ymax);
    const double rvx = uniform_range(rng_, -cfg_.sample_vmax, cfg_.sample_vmax);
    const double rvy = uniform_range(rng_, -cfg_.sample_vmax, cfg_.sample_vmax);
    if (pick < cfg_.goal_bias) return sc_.goal;
    return {rx, ry, rvx, rvy};
  }

  int nearest(const State& target) const {
    int best = 0;
    double best_d = kInf;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double d = state_distance(nodes_[i].state, target, cfg_.vel_weight);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  bool is_ancestor(int maybe_ancestor, int node) const {
    for (int v = node; v != -1; v = nodes_[static_cast<std::size_t>(v)].parent)
      if (v == maybe_ancestor) return true;
    return false;
  }

  /// Tries to reroute nearby nodes through the freshly inserted node.
  /// A rewire re-steers (dynamics forbid exact connections); on success the
  /// target node is re-rooted at the re-steered endpoint and its whole
  /// subtree is re-simulated and revalidated before anything is committed.
  void rewire_through(int new_idx, int iter) {
    const std::size_t count = nodes_.size();
    for (std::size_t j = 0; j < count; ++j) {
      const int tgt = static_cast<int>(j);
      if (tgt == new_idx || nodes_[j].parent == -1) continue;
      if (state_distance(nodes_[j].state,
                         nodes_[static_cast<std::size_t>(new_idx)].state,
                         cfg_.vel_weight) > cfg_.neighbor_radius)
        continue;
      if (is_ancestor(tgt, new_idx)) continue;

      auto cand = steer(nodes_[static_cast<std::size_t>(new_idx)].state,
                        nodes_[static_cast<std::size_t>(new_idx)].time,
                        nodes_[j].state, sc_, cfg_, rng_);
      if (!cand) continue;
      if (state_distance(cand->end, nodes_[j].state, cfg_.vel_weight) >
          cfg_.rewire_tolerance)
        continue;
      const double new_cost =
          nodes_[static_cast<std::size_t>(new_idx)].cost + cand->cost;
      if (new_cost >= nodes_[j].cost - 1e-12) continue;
      if (try_commit_rewire(tgt, new_idx, *cand, iter)) ++rewires_;
    }
  }

  bool try_commit_rewire(int tgt, int new_parent, const SteerResult& cand,
                         int iter) {
    // Tentative state/time/cost for the target and its whole subtree.
    struct Update {
      int node;
      State state;
      double time;
      double cost;
    };
    std::vector<int> order;  // BFS: parents precede children
    order.push_back(tgt);
    for (std::size_t k = 0; k < order.size(); ++k)
      for (int c : nodes_[static_cast<std::size_t>(order[k])].children)
        order.push_back(c);
    std::vector<int> slot(nodes_.size(), -1);  // node -> position in order
    for (std::size_t k = 0; k < order.size(); ++k)
      slot[static_cast<std::size_t>(order[k])] = static_cast<int>(k);

    std::vector<Update> updates;
    updates.reserve(order.size());
    updates.push_back(
        {tgt, cand.end,
         nodes_[static_cast<std::size_t>(new_parent)].time + cfg_.dt_segment,
         nodes_[static_cast<std::size_t>(new_parent)].cost + cand.cost});
    for (std::size_t k = 1; k < order.size(); ++k) {
      const int node = order[k];
      const TreeNode& n = nodes_[static_cast<std::size_t>(node)];
      // Every non-root node in `order` has its parent earlier in `order`.
      const Update& pu =
          updates[static_cast<std::size_t>(slot[static_cast<std::size_t>(n.parent)])];
      const auto seg = integrate_segment(pu.state, pu.time, n.u_in, sc_, cfg_);
      if (!seg) return false;  // shifted subtree is no longer feasible
      updates.push_back({node, seg->end, pu.time + n.duration,
                         pu.cost + seg->cost});
    }

    // Commit.
    TreeNode& t = nodes_[static_cast<std::size_t>(tgt)];
    auto& old_children =
        nodes_[static_cast<std::size_t>(t.parent)].children;
    old_children.erase(std::find(old_children.begin(), old_children.end(), tgt));
    t.parent = new_parent;
    t.u_in = cand.u;
    t.duration = cfg_.dt_segment;
    nodes_[static_cast<std::size_t>(new_parent)].children.push_back(tgt);
    for (const Update& u : updates) {
      TreeNode& n = nodes_[static_cast<std::size_t>(u.node)];
      n.state = u.state;
      n.time = u.time;
      n.cost = u.cost;
      try_goal(u.node, iter);
    }
    return true;
  }

  void try_goal(int node, int iter = 0) {
    const TreeNode& n = nodes_[static_cast<std::size_t>(node)];
    const double pos_err = std::hypot(n.state.x - sc_.goal.x,
                                      n.state.y - sc_.goal.y);
    if (pos_err > cfg_.goal_tolerance) return;
    if (n.cost >= best_cost_) return;
    // The root carries no incoming segment; a replayable solution needs at
    // least one real extension even when the start sits in the goal region.
    if (node == 0) return;
    best_cost_ = n.cost;
    best_schedule_.clear();
    for (int v = node; v != 0; v = nodes_[static_cast<std::size_t>(v)].parent)
      best_schedule_.push_back({nodes_[static_cast<std::size_t>(v)].u_in,
                                nodes_[static_cast<std::size_t>(v)].duration});
    std::reverse(best_schedule_.begin(), best_schedule_.end());
    improvements_.emplace_back(iter, best_cost_);
  }

  void verify_tree() const {
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      const TreeNode& n = nodes_[i];
      const TreeNode& p = nodes_[static_cast<std::size_t>(n.parent)];
      const auto seg = integrate_segment(p.state, p.time, n.u_in, sc_, cfg_);
      if (!seg) throw PlannerError("rrt: invariant violation (edge infeasible)");
      const double drift =
          std::hypot(seg->end.x - n.state.x, seg->end.y - n.state.y) +
          std::hypot(seg->end.vx - n.state.vx, seg->end.vy - n.state.vy);
      if (drift > 1e-9)
        throw PlannerError("rrt: invariant violation (stored endpoint drift)");
      if (std::fabs(p.cost + seg->cost - n.cost) > 1e-9)
        throw PlannerError("rrt: invariant violation (cost bookkeeping)");
    }
  }

  const Scenario& sc_;
  const RrtConfig& cfg_;
  std::mt19937_64 rng_;
  std::vector<TreeNode> nodes_;
  std::vector<ControlSegment> best_schedule_;
  double best_cost_ = kInf;
  int rewires_ = 0;
  std::vector<std::pair<int, double>> improvements_;
};

}  // namespace

RrtPlan plan(const Scenario& sc, const RrtConfig& cfg) {
  sc.validate();
  cfg.validate();
  return Planner(sc, cfg).run();
}

}  // namespace windplan::rrt
