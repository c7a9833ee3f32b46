#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "core/environment.hpp"
#include "core/options.hpp"
#include "core/scenario_io.hpp"

namespace testutil {

inline double rel_err(double a, double b) {
  const double denom = std::max({1e-12, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) / denom;
}

/// Central finite-difference gradient of f at x.
inline std::vector<double> fd_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double h = 1e-6) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double fp = f(x);
    x[i] = orig - h;
    const double fm = f(x);
    x[i] = orig;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline windplan::Scenario load_bundled(const std::string& name) {
  windplan::Options none;
  return windplan::io::load_scenario(
      std::string(WINDPLAN_SCENARIO_DIR) + "/" + name, none);
}

/// Small open-field scenario for unit tests.
inline windplan::Scenario mini_scenario() {
  windplan::Scenario sc;
  sc.name = "mini";
  sc.start = {0.0, 0.0, 0.0, 0.0};
  sc.goal = {2.0, 1.0, 0.0, 0.0};
  sc.horizon_T = 3.0;
  sc.bounds = {-2.0, 6.0, -2.0, 5.0};
  sc.dynamics.c_d = 0.3;
  sc.dynamics.wind = {1.0, 1.0, 10.0, 10.0};
  sc.obstacles = {{1.0, 0.8, 0.3}};
  return sc;
}

}  // namespace testutil
