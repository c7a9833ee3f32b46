#include "core/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "core/errors.hpp"

namespace windplan::io {

namespace {

double parse_double(const std::string& field, const char* context) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  double v;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw ParseError(std::string(context) + ": bad number '" + field + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  (void)ec;
  return std::string(buf, ptr);
}

std::string trajectory_to_csv(const TrajectoryRecord& tr) {
  tr.validate();
  std::string out = "t,x,y,vx,vy,ux,uy\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out += format_double(tr.t[i]);
    for (const auto* col : {&tr.x, &tr.y, &tr.vx, &tr.vy, &tr.ux, &tr.uy}) {
      out += ',';
      out += format_double((*col)[i]);
    }
    out += '\n';
  }
  return out;
}

TrajectoryRecord trajectory_from_csv(const std::string& text) {
  const auto rows = lines_of(text);
  if (rows.empty() || rows[0] != "t,x,y,vx,vy,ux,uy")
    throw ParseError("trajectory csv: missing header 't,x,y,vx,vy,ux,uy'");
  TrajectoryRecord tr;
  tr.reserve(rows.size() - 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i], ',');
    if (f.size() != 7)
      throw ParseError("trajectory csv: row " + std::to_string(i) +
                       " has " + std::to_string(f.size()) + " fields, want 7");
    tr.push_row(parse_double(f[0], "trajectory csv"),
                parse_double(f[1], "trajectory csv"),
                parse_double(f[2], "trajectory csv"),
                parse_double(f[3], "trajectory csv"),
                parse_double(f[4], "trajectory csv"),
                parse_double(f[5], "trajectory csv"),
                parse_double(f[6], "trajectory csv"));
  }
  tr.validate();
  return tr;
}

void write_trajectory_csv(const std::string& path,
                          const TrajectoryRecord& tr) {
  write_file(path, trajectory_to_csv(tr));
}

TrajectoryRecord read_trajectory_csv(const std::string& path) {
  return trajectory_from_csv(read_file(path));
}

std::string metrics_to_csv(std::span<const metrics::MetricsReport> reports) {
  std::string out = "planner,E_ctrl,S_ctrl,L_path,T_flight,d_min\n";
  for (const auto& r : reports) {
    out += r.planner;
    for (double v : {r.e_ctrl, r.s_ctrl, r.l_path, r.t_flight, r.d_min}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<metrics::MetricsReport> metrics_from_csv(const std::string& text) {
  const auto rows = lines_of(text);
  if (rows.empty() || rows[0] != "planner,E_ctrl,S_ctrl,L_path,T_flight,d_min")
    throw ParseError("metrics csv: bad header");
  std::vector<metrics::MetricsReport> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i], ',');
    if (f.size() != 6)
      throw ParseError("metrics csv: row " + std::to_string(i) +
                       " needs 6 fields");
    metrics::MetricsReport r;
    r.planner = f[0];
    auto num = [&](const std::string& s) {
      if (s == "inf") return std::numeric_limits<double>::infinity();
      if (s == "-inf") return -std::numeric_limits<double>::infinity();
      return parse_double(s, "metrics csv");
    };
    r.e_ctrl = num(f[1]);
    r.s_ctrl = num(f[2]);
    r.l_path = num(f[3]);
    r.t_flight = num(f[4]);
    r.d_min = num(f[5]);
    out.push_back(std::move(r));
  }
  return out;
}

void write_metrics_csv(const std::string& path,
                       std::span<const metrics::MetricsReport> reports) {
  write_file(path, metrics_to_csv(reports));
}

std::vector<metrics::MetricsReport> read_metrics_csv(const std::string& path) {
  return metrics_from_csv(read_file(path));
}

std::string train_report_to_csv(const pinn::TrainReport& report) {
  std::string out = "epoch,L_phys,L_bc,L_obj,L_total\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.epoch);
    for (double v : {row.l_phys, row.l_bc, row.l_obj, row.l_total}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void write_train_report_csv(const std::string& path,
                            const pinn::TrainReport& report) {
  write_file(path, train_report_to_csv(report));
}

std::string read_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw IoError("cannot open file: " + path);
  std::string out;
  char chunk[65536];
  std::size_t n;
  while ((n = std::fread(chunk, 1, sizeof(chunk), f)) > 0) out.append(chunk, n);
  std::fclose(f);
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot open file for writing: " + path);
  const std::size_t written = std::fwrite(content.data(), 1, content.size(), f);
  std::fclose(f);
  if (written != content.size()) throw IoError("short write: " + path);
}

}  // namespace windplan::io
