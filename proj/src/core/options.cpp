#include "core/options.hpp"

#include <array>
#include <charconv>

#include "core/errors.hpp"

namespace windplan {

namespace {

// Every overridable setting (scenario file keys use section.key form).
constexpr std::array kKnownKeys = {
    "scenario.name", "scenario.horizon_T", "scenario.u_max", "scenario.start",
    "scenario.goal", "scenario.bounds",
    "dynamics.c_d",
    "wind.A_x", "wind.A_y", "wind.L_x", "wind.L_y",
    "barrier.eps", "barrier.alpha",
    "pinn.epochs", "pinn.collocation_points", "pinn.learning_rate",
    "pinn.seed", "pinn.checkpoint_interval", "pinn.quadrature_nodes",
    "pinn.threads", "pinn.hidden_layers", "pinn.hidden_width", "pinn.omega0",
    "pinn.init", "pinn.lambda_phys", "pinn.lambda_bc", "pinn.lambda_obj",
    "pinn.alpha", "pinn.beta", "pinn.gamma", "pinn.delta",
    "pinn.curriculum_floor", "pinn.curriculum_end_frac", "pinn.samples",
    "astar.cell", "astar.v_ref", "astar.alpha", "astar.gamma",
    "astar.samples", "astar.max_densify",
    "rrt.max_iterations", "rrt.dt_segment", "rrt.goal_tolerance",
    "rrt.goal_bias", "rrt.neighbor_radius", "rrt.candidates",
    "rrt.vel_weight", "rrt.rewire_tolerance", "rrt.safety_buffer",
    "rrt.sample_vmax", "rrt.alpha", "rrt.gamma", "rrt.sim_dt", "rrt.samples",
};

}  // namespace

bool Options::known_key(const std::string& key) {
  for (const char* k : kKnownKeys)
    if (key == k) return true;
  return false;
}

void Options::set(const std::string& key, const std::string& value) {
  if (!known_key(key))
    throw ConfigError("unknown option key '" + key + "'");
  kv_[key] = value;
}

bool Options::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Options::get_string(const std::string& key,
                                const std::string& fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double Options::get_double(const std::string& key, double fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  double v;
  const char* b = it->second.data();
  const char* e = b + it->second.size();
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e)
    throw ConfigError("option '" + key + "': bad number '" + it->second + "'");
  return v;
}

int Options::get_int(const std::string& key, int fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  int v;
  const char* b = it->second.data();
  const char* e = b + it->second.size();
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e)
    throw ConfigError("option '" + key + "': bad integer '" + it->second + "'");
  return v;
}

std::uint64_t Options::get_u64(const std::string& key,
                               std::uint64_t fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::uint64_t v;
  const char* b = it->second.data();
  const char* e = b + it->second.size();
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e)
    throw ConfigError("option '" + key + "': bad integer '" + it->second + "'");
  return v;
}

}  // namespace windplan
