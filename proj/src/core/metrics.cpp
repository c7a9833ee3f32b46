#include "core/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "core/errors.hpp"

namespace windplan::metrics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    acc += 0.5 * (f[i] + f[i - 1]) * (t[i] - t[i - 1]);
  return acc;
}

std::array<double, 5> metric_values(const MetricsReport& r) {
  return {r.e_ctrl, r.s_ctrl, r.l_path, r.t_flight, r.d_min};
}

}  // namespace

double energy_index(const TrajectoryRecord& tr) {
  tr.validate();
  const std::size_t n = tr.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i)
    f[i] = tr.ux[i] * tr.ux[i] + tr.uy[i] * tr.uy[i];
  return trapezoid(tr.t, f) / (tr.t.back() - tr.t.front());
}

double smoothness_index(const TrajectoryRecord& tr) {
  tr.validate();
  const std::size_t n = tr.size();
  if (n < 3) throw ConfigError("smoothness_index: needs >= 3 samples");
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    double dux, duy;
    if (i == 0) {
      dux = (tr.ux[1] - tr.ux[0]) / (tr.t[1] - tr.t[0]);
      duy = (tr.uy[1] - tr.uy[0]) / (tr.t[1] - tr.t[0]);
    } else if (i == n - 1) {
      dux = (tr.ux[n - 1] - tr.ux[n - 2]) / (tr.t[n - 1] - tr.t[n - 2]);
      duy = (tr.uy[n - 1] - tr.uy[n - 2]) / (tr.t[n - 1] - tr.t[n - 2]);
    } else {
      dux = (tr.ux[i + 1] - tr.ux[i - 1]) / (tr.t[i + 1] - tr.t[i - 1]);
      duy = (tr.uy[i + 1] - tr.uy[i - 1]) / (tr.t[i + 1] - tr.t[i - 1]);
    }
    f[i] = dux * dux + duy * duy;
  }
  return trapezoid(tr.t, f) / (tr.t.back() - tr.t.front());
}

double path_length(const TrajectoryRecord& tr) {
  tr.validate();
  double len = 0.0;
  for (std::size_t i = 1; i < tr.size(); ++i)
    len += std::hypot(tr.x[i] - tr.x[i - 1], tr.y[i] - tr.y[i - 1]);
  return len;
}

double flight_time(const TrajectoryRecord& tr) {
  tr.validate();  // rejects non-monotone time grids
  return tr.t.back() - tr.t.front();
}

double min_safety_margin(const TrajectoryRecord& tr,
                         std::span<const Obstacle> obstacles) {
  tr.validate();
  if (obstacles.empty()) return kInf;
  double dmin = kInf;
  for (std::size_t i = 0; i < tr.size(); ++i)
    for (const Obstacle& o : obstacles)
      dmin = std::min(dmin, signed_distance(o, tr.x[i], tr.y[i]));
  return dmin;
}

double min_safety_margin_refined(const TrajectoryRecord& tr,
                                 std::span<const Obstacle> obstacles,
                                 const PositionFn& position_at) {
  tr.validate();
  if (obstacles.empty()) return kInf;

  double dmin = kInf;
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < tr.size(); ++i)
    for (const Obstacle& o : obstacles) {
      const double d = signed_distance(o, tr.x[i], tr.y[i]);
      if (d < dmin) {
        dmin = d;
        argmin = i;
      }
    }

  const std::size_t lo = (argmin == 0) ? 0 : argmin - 1;
  const std::size_t hi = std::min(argmin + 1, tr.size() - 1);
  const int refine = 10 * static_cast<int>(hi - lo);
  for (int k = 0; k <= refine; ++k) {
    const double t = tr.t[lo] + (tr.t[hi] - tr.t[lo]) * k / refine;
    const Vec2 p = position_at(t);
    for (const Obstacle& o : obstacles)
      dmin = std::min(dmin, signed_distance(o, p.x, p.y));
  }
  return dmin;
}

MetricsReport compute_all(const TrajectoryRecord& tr, const Scenario& sc) {
  MetricsReport r;
  r.planner = tr.planner;
  r.e_ctrl = energy_index(tr);
  r.s_ctrl = smoothness_index(tr);
  r.l_path = path_length(tr);
  r.t_flight = flight_time(tr);
  r.d_min = min_safety_margin(tr, sc.obstacles);
  return r;
}

Comparison compare(std::span<const MetricsReport> reports) {
  if (reports.empty()) throw ConfigError("compare: needs >= 1 report");
  Comparison c;
  c.raw.assign(reports.begin(), reports.end());
  for (const auto& r : reports) c.names.push_back(r.planner);

  const std::size_t np = reports.size();
  c.normalized.assign(5, std::vector<double>(np, 0.0));
  c.ranking.assign(5, {});
  for (int m = 0; m < 5; ++m) {
    double vmax = -kInf;
    for (const auto& r : reports) vmax = std::max(vmax, metric_values(r)[m]);
    for (std::size_t p = 0; p < np; ++p) {
      const double v = metric_values(reports[p])[m];
      if (std::isinf(vmax))
        c.normalized[m][p] = std::isinf(v) ? 1.0 : 0.0;
      else
        c.normalized[m][p] = (vmax == 0.0) ? 0.0 : v / vmax;
    }
    std::vector<int> order(np);
    std::iota(order.begin(), order.end(), 0);
    const bool benefit = (m == 4);  // d_min: larger is better
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      const double va = metric_values(reports[static_cast<std::size_t>(a)])[m];
      const double vb = metric_values(reports[static_cast<std::size_t>(b)])[m];
      return benefit ? va > vb : va < vb;
    });
    c.ranking[m] = std::move(order);
  }
  return c;
}

std::string format_table(const Comparison& c) {
  std::ostringstream os;
  os << "planner";
  for (const char* m : kMetricNames) os << '\t' << m;
  os << '\n';
  for (std::size_t p = 0; p < c.names.size(); ++p) {
    os << c.names[p];
    const auto vals = metric_values(c.raw[p]);
    for (int m = 0; m < 5; ++m) {
      os << '\t';
      if (std::isinf(vals[m]))
        os << "n/a";
      else
        os << vals[m];
      os << " (" << c.normalized[m][static_cast<std::size_t>(p)] << ")";
    }
    os << '\n';
  }
  os << "best-per-metric:";
  for (int m = 0; m < 5; ++m)
    os << ' ' << kMetricNames[m] << '='
       << c.names[static_cast<std::size_t>(c.ranking[m].front())];
  os << '\n';
  return os.str();
}

}  // namespace windplan::metrics
