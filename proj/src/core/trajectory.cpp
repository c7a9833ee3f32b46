#include "core/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace windplan {

void TrajectoryRecord::reserve(std::size_t n) {
  t.reserve(n);
  x.reserve(n);
  y.reserve(n);
  vx.reserve(n);
  vy.reserve(n);
  ux.reserve(n);
  uy.reserve(n);
}

void TrajectoryRecord::push_row(double t_, double x_, double y_, double vx_,
                                double vy_, double ux_, double uy_) {
  t.push_back(t_);
  x.push_back(x_);
  y.push_back(y_);
  vx.push_back(vx_);
  vy.push_back(vy_);
  ux.push_back(ux_);
  uy.push_back(uy_);
}

void TrajectoryRecord::validate() const {
  if (t.size() < 2) throw ConfigError("trajectory: needs at least 2 samples");
  const std::size_t n = t.size();
  for (const auto* col : {&x, &y, &vx, &vy, &ux, &uy}) {
    if (col->size() != n) throw ConfigError("trajectory: ragged columns");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double vals[] = {t[i], x[i], y[i], vx[i], vy[i], ux[i], uy[i]};
    for (double v : vals) {
      if (!std::isfinite(v))
        throw ConfigError("trajectory: non-finite value at row " +
                          std::to_string(i));
    }
    if (i > 0 && !(t[i] > t[i - 1]))
      throw ConfigError("trajectory: time grid not strictly increasing at row " +
                        std::to_string(i));
  }
}

TrajectoryRecord resample_uniform(const TrajectoryRecord& tr, int n_samples) {
  tr.validate();
  if (n_samples < 2) throw ConfigError("resample: n_samples must be >= 2");

  TrajectoryRecord out;
  out.planner = tr.planner;
  out.reserve(static_cast<std::size_t>(n_samples));

  const double t0 = tr.t.front();
  const double t1 = tr.t.back();
  const double dt = (t1 - t0) / (n_samples - 1);

  std::size_t hi = 1;  // tr.t[hi-1] <= tq <= tr.t[hi]
  for (int k = 0; k < n_samples; ++k) {
    const double tq = (k == n_samples - 1) ? t1 : t0 + k * dt;
    while (hi + 1 < tr.t.size() && tr.t[hi] < tq) ++hi;
    const std::size_t lo = hi - 1;
    const double span = tr.t[hi] - tr.t[lo];
    const double w = std::clamp((tq - tr.t[lo]) / span, 0.0, 1.0);
    auto lerp = [&](const std::vector<double>& c) {
      return c[lo] + w * (c[hi] - c[lo]);
    };
    // Controls are piecewise constant between samples.
    const std::size_t uidx = (w < 1.0) ? lo : hi;
    out.push_row(tq, lerp(tr.x), lerp(tr.y), lerp(tr.vx), lerp(tr.vy),
                 tr.ux[uidx], tr.uy[uidx]);
  }
  return out;
}

}  // namespace windplan
