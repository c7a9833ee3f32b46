#include "core/spline.hpp"

#include <algorithm>
#include <cstddef>

#include "core/errors.hpp"

namespace windplan {

CubicSpline::CubicSpline(std::vector<double> knots, std::vector<double> values)
    : s_(std::move(knots)), f_(std::move(values)) {
  const std::size_t n = s_.size();
  if (n < 2 || f_.size() != n)
    throw ConfigError("spline: needs >= 2 knots and matching values");
  for (std::size_t i = 1; i < n; ++i)
    if (!(s_[i] > s_[i - 1]))
      throw ConfigError("spline: knots must be strictly increasing");

  m_.assign(n, 0.0);
  if (n == 2) return;

  // Thomas solve of the natural-spline tridiagonal system.
  const std::size_t m = n - 2;
  std::vector<double> diag(m), upper(m), rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double h0 = s_[i + 1] - s_[i];
    const double h1 = s_[i + 2] - s_[i + 1];
    diag[i] = (h0 + h1) / 3.0;
    upper[i] = h1 / 6.0;
    rhs[i] = (f_[i + 2] - f_[i + 1]) / h1 - (f_[i + 1] - f_[i]) / h0;
  }
  for (std::size_t i = 1; i < m; ++i) {
    const double lower = (s_[i + 1] - s_[i]) / 6.0;
    const double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[m] = rhs[m - 1] / diag[m - 1];
  for (std::size_t i = m - 1; i-- > 0;)
    m_[i + 1] = (rhs[i] - upper[i] * m_[i + 2]) / diag[i];
}

std::size_t CubicSpline::interval(double s) const {
  if (s <= s_.front()) return 0;
  if (s >= s_.back()) return s_.size() - 2;
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  return static_cast<std::size_t>(it - s_.begin()) - 1;
}

double CubicSpline::eval(double s) const {
  const std::size_t i = interval(s);
  const double h = s_[i + 1] - s_[i];
  const double a = (s_[i + 1] - s) / h;
  const double b = (s - s_[i]) / h;
  return a * f_[i] + b * f_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::deriv(double s) const {
  const std::size_t i = interval(s);
  const double h = s_[i + 1] - s_[i];
  const double a = (s_[i + 1] - s) / h;
  const double b = (s - s_[i]) / h;
  return (f_[i + 1] - f_[i]) / h +
         ((1.0 - 3.0 * a * a) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h /
             6.0;
}

double CubicSpline::deriv2(double s) const {
  const std::size_t i = interval(s);
  const double h = s_[i + 1] - s_[i];
  const double a = (s_[i + 1] - s) / h;
  const double b = (s - s_[i]) / h;
  return a * m_[i] + b * m_[i + 1];
}

}  // namespace windplan
