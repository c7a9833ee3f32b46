#include "core/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace windplan::plot {

namespace {

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                "#d62728", "#9467bd", "#8c564b"};

std::string num(double v, int decimals = 2) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace

std::string trajectories_svg(const Scenario& sc,
                             std::span<const TrajectoryRecord> trajectories,
                             double wind_time) {
  const double margin = 44.0;
  const double plot_w = 760.0;
  const double wx = sc.bounds.xmax - sc.bounds.xmin;
  const double wy = sc.bounds.ymax - sc.bounds.ymin;
  const double scale = plot_w / wx;
  const double plot_h = wy * scale;
  const double width = plot_w + 2 * margin;
  const double height = plot_h + 2 * margin;

  auto X = [&](double x) { return margin + (x - sc.bounds.xmin) * scale; };
  auto Y = [&](double y) { return margin + (sc.bounds.ymax - y) * scale; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
     << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width)
     << " " << num(height) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\""
     << num(height) << "\" fill=\"white\"/>\n";
  os << "<rect x=\"" << num(X(sc.bounds.xmin)) << "\" y=\""
     << num(Y(sc.bounds.ymax)) << "\" width=\"" << num(wx * scale)
     << "\" height=\"" << num(wy * scale)
     << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << num(margin) << "\" y=\"" << num(margin - 14.0)
     << "\" font-family=\"sans-serif\" font-size=\"15\">scenario: " << sc.name
     << " (wind snapshot t=" << num(wind_time, 3) << " s)</text>\n";

  // Wind quiver on a coarse grid.
  os << "<g stroke=\"#9db8d2\" stroke-width=\"1\" fill=\"#9db8d2\">\n";
  const int qx = 16, qy = 12;
  double wmax = 1e-9;
  for (int i = 0; i < qx; ++i)
    for (int j = 0; j < qy; ++j) {
      const double x = sc.bounds.xmin + wx * (i + 0.5) / qx;
      const double y = sc.bounds.ymin + wy * (j + 0.5) / qy;
      const WindVec<double> w = wind_at(sc.dynamics.wind, x, y, wind_time);
      wmax = std::max({wmax, std::fabs(w.x), std::fabs(w.y)});
    }
  const double arrow = 0.8 * (wx / qx) / wmax;
  for (int i = 0; i < qx; ++i)
    for (int j = 0; j < qy; ++j) {
      const double x = sc.bounds.xmin + wx * (i + 0.5) / qx;
      const double y = sc.bounds.ymin + wy * (j + 0.5) / qy;
      const WindVec<double> w = wind_at(sc.dynamics.wind, x, y, wind_time);
      const double tipx = x + arrow * w.x;
      const double tipy = y + arrow * w.y;
      os << "<line x1=\"" << num(X(x)) << "\" y1=\"" << num(Y(y)) << "\" x2=\""
         << num(X(tipx)) << "\" y2=\"" << num(Y(tipy)) << "\"/>";
      os << "<circle cx=\"" << num(X(tipx)) << "\" cy=\"" << num(Y(tipy))
         << "\" r=\"1.6\"/>\n";
    }
  os << "</g>\n";

  // Obstacles: radii share the world-to-pixel scale factor.
  for (const Obstacle& o : sc.obstacles)
    os << "<circle cx=\"" << num(X(o.cx)) << "\" cy=\"" << num(Y(o.cy))
       << "\" r=\"" << num(o.r * scale)
       << "\" fill=\"#bbbbbb\" stroke=\"#666666\" stroke-width=\"1\"/>\n";

  for (std::size_t k = 0; k < trajectories.size(); ++k) {
    const TrajectoryRecord& tr = trajectories[k];
    const char* color = kPalette[k % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < tr.size(); ++i) {
      if (i) os << ' ';
      os << num(X(tr.x[i])) << ',' << num(Y(tr.y[i]));
    }
    os << "\"/>\n";
  }

  os << "<circle cx=\"" << num(X(sc.start.x)) << "\" cy=\""
     << num(Y(sc.start.y))
     << "\" r=\"6\" fill=\"#2ca02c\" stroke=\"#14501a\"/>\n";
  os << "<rect x=\"" << num(X(sc.goal.x) - 5.5) << "\" y=\""
     << num(Y(sc.goal.y) - 5.5)
     << "\" width=\"11\" height=\"11\" fill=\"#d62728\" "
        "stroke=\"#58100f\" transform=\"rotate(45 " << num(X(sc.goal.x))
     << " " << num(Y(sc.goal.y)) << ")\"/>\n";

  double ly = margin + 16.0;
  for (std::size_t k = 0; k < trajectories.size(); ++k) {
    const double lx = width - margin - 150.0;
    os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4.0)
       << "\" x2=\"" << num(lx + 26.0) << "\" y2=\"" << num(ly - 4.0)
       << "\" stroke=\"" << kPalette[k % 6] << "\" stroke-width=\"3\"/>";
    os << "<text x=\"" << num(lx + 32.0) << "\" y=\"" << num(ly)
       << "\" font-family=\"sans-serif\" font-size=\"13\">"
       << (trajectories[k].planner.empty() ? "trajectory"
                                           : trajectories[k].planner)
       << "</text>\n";
    ly += 18.0;
  }

  os << "</svg>\n";
  return os.str();
}

std::string comparison_svg(const metrics::Comparison& cmp) {
  const double width = 820.0, height = 440.0;
  const double ml = 60.0, mr = 20.0, mt = 40.0, mb = 70.0;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;
  const std::size_t np = cmp.names.size();

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
     << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width)
     << " " << num(height) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\""
     << num(height) << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(ml) << "\" y=\"" << num(mt - 16.0)
     << "\" font-family=\"sans-serif\" font-size=\"15\">metrics, normalized "
        "per column maximum</text>\n";

  // Axis and unit gridline.
  os << "<line x1=\"" << num(ml) << "\" y1=\"" << num(mt + plot_h)
     << "\" x2=\"" << num(ml + plot_w) << "\" y2=\"" << num(mt + plot_h)
     << "\" stroke=\"#333333\"/>\n";
  for (double tick : {0.0, 0.5, 1.0}) {
    const double y = mt + plot_h * (1.0 - tick);
    os << "<line x1=\"" << num(ml - 4.0) << "\" y1=\"" << num(y) << "\" x2=\""
       << num(ml + plot_w) << "\" y2=\"" << num(y)
       << "\" stroke=\"#dddddd\"/>";
    os << "<text x=\"" << num(ml - 34.0) << "\" y=\"" << num(y + 4.0)
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << num(tick, 1)
       << "</text>\n";
  }

  const double group_w = plot_w / 5.0;
  const double bar_w = std::min(34.0, 0.7 * group_w / std::max<std::size_t>(np, 1));
  for (int m = 0; m < 5; ++m) {
    const double gx = ml + m * group_w;
    for (std::size_t p = 0; p < np; ++p) {
      const double v = cmp.normalized[static_cast<std::size_t>(m)][p];
      const double shown = std::clamp(v, 0.0, 1.0);
      const double bx =
          gx + group_w / 2.0 + (static_cast<double>(p) - np / 2.0) * bar_w;
      const double bh = shown * plot_h;
      os << "<rect class=\"bar\" data-metric=\"" << metrics::kMetricNames[m]
         << "\" data-planner=\"" << cmp.names[p] << "\" data-value=\""
         << num(v, 3) << "\" x=\"" << num(bx) << "\" y=\""
         << num(mt + plot_h - bh) << "\" width=\"" << num(bar_w * 0.9)
         << "\" height=\"" << num(bh) << "\" fill=\"" << kPalette[p % 6]
         << "\"/>\n";
    }
    os << "<text x=\"" << num(gx + group_w / 2.0 - 24.0) << "\" y=\""
       << num(mt + plot_h + 22.0)
       << "\" font-family=\"sans-serif\" font-size=\"13\">"
       << metrics::kMetricNames[m] << "</text>\n";
  }

  double lx = ml;
  const double ly = height - 22.0;
  for (std::size_t p = 0; p < np; ++p) {
    os << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly - 11.0)
       << "\" width=\"14\" height=\"14\" fill=\"" << kPalette[p % 6]
       << "\"/>";
    os << "<text x=\"" << num(lx + 20.0) << "\" y=\"" << num(ly)
       << "\" font-family=\"sans-serif\" font-size=\"13\">" << cmp.names[p]
       << "</text>\n";
    lx += 28.0 + 9.0 * cmp.names[p].size();
  }

  os << "</svg>\n";
  return os.str();
}

}  // namespace windplan::plot
