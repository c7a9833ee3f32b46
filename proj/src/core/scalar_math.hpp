#pragma once

#include <cmath>

namespace windplan {

/// ln(1 + e^z), overflow-safe on both tails.
inline double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

/// 1 / (1 + e^-z), overflow-safe.
inline double logistic(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline double square(double z) { return z * z; }

}  // namespace windplan
