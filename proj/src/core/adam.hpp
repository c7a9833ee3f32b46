#pragma once

#include <span>
#include <vector>

namespace windplan::diff {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First/second moment state for Adam with bias correction.
struct AdamState {
  AdamConfig cfg;
  long step = 0;
  std::vector<double> m;
  std::vector<double> v;

  static AdamState init(std::size_t n, const AdamConfig& cfg);
};

/// One Adam update in place. Throws ConfigError on shape mismatch.
void adam_step(AdamState& st, std::span<double> params,
               std::span<const double> grads);

}  // namespace windplan::diff
