#pragma once

#include <cmath>

#include "core/scalar_math.hpp"

namespace windplan::diff {

/// First-order dual number carrying a value and its derivative with
/// respect to the scalar network input (normalized time).
struct TimeJet {
  double value = 0.0;
  double d_dt = 0.0;
};

inline TimeJet operator+(TimeJet a, TimeJet b) {
  return {a.value + b.value, a.d_dt + b.d_dt};
}
inline TimeJet operator-(TimeJet a, TimeJet b) {
  return {a.value - b.value, a.d_dt - b.d_dt};
}
inline TimeJet operator-(TimeJet a) { return {-a.value, -a.d_dt}; }
inline TimeJet operator*(TimeJet a, TimeJet b) {
  return {a.value * b.value, a.d_dt * b.value + a.value * b.d_dt};
}
inline TimeJet operator/(TimeJet a, TimeJet b) {
  const double inv = 1.0 / b.value;
  return {a.value * inv, (a.d_dt - a.value * inv * b.d_dt) * inv};
}

inline TimeJet operator+(TimeJet a, double c) { return {a.value + c, a.d_dt}; }
inline TimeJet operator+(double c, TimeJet a) { return a + c; }
inline TimeJet operator-(TimeJet a, double c) { return {a.value - c, a.d_dt}; }
inline TimeJet operator-(double c, TimeJet a) { return {c - a.value, -a.d_dt}; }
inline TimeJet operator*(TimeJet a, double c) {
  return {a.value * c, a.d_dt * c};
}
inline TimeJet operator*(double c, TimeJet a) { return a * c; }
inline TimeJet operator/(TimeJet a, double c) { return a * (1.0 / c); }
inline TimeJet operator/(double c, TimeJet a) {
  const double inv = 1.0 / a.value;
  return {c * inv, -c * inv * inv * a.d_dt};
}

inline TimeJet sin(TimeJet a) {
  return {std::sin(a.value), std::cos(a.value) * a.d_dt};
}
inline TimeJet cos(TimeJet a) {
  return {std::cos(a.value), -std::sin(a.value) * a.d_dt};
}
inline TimeJet exp(TimeJet a) {
  const double e = std::exp(a.value);
  return {e, e * a.d_dt};
}
inline TimeJet log(TimeJet a) {
  return {std::log(a.value), a.d_dt / a.value};
}
inline TimeJet sqrt(TimeJet a) {
  const double s = std::sqrt(a.value);
  return {s, a.d_dt / (2.0 * s)};
}
inline TimeJet softplus(TimeJet a) {
  return {windplan::softplus(a.value), windplan::logistic(a.value) * a.d_dt};
}

}  // namespace windplan::diff
