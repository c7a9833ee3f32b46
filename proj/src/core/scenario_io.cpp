#include "core/scenario_io.hpp"

#include <charconv>
#include <map>
#include <sstream>
#include <vector>

#include "core/csv_io.hpp"
#include "core/errors.hpp"

namespace windplan::io {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const std::string& field) {
  double v;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e)
    throw ParseError("scenario: field '" + field + "': bad number '" + s + "'");
  return v;
}

std::vector<double> to_doubles(const std::string& s, std::size_t n,
                               const std::string& field) {
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double(tok, field));
  if (out.size() != n)
    throw ParseError("scenario: field '" + field + "' needs " +
                     std::to_string(n) + " numbers, got " +
                     std::to_string(out.size()));
  return out;
}

struct RawDoc {
  // section.key -> value for the singleton sections
  std::map<std::string, std::string> kv;
  // one map per [obstacle] section, in file order
  std::vector<std::map<std::string, std::string>> obstacles;
  bool has_version = false;
  int version = 0;
};

RawDoc parse_raw(const std::string& text) {
  RawDoc doc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("scenario: line " + std::to_string(lineno) +
                         ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ParseError("scenario: line " + std::to_string(lineno) +
                         ": empty section name");
      if (section == "obstacle") doc.obstacles.emplace_back();
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("scenario: line " + std::to_string(lineno) +
                       ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError("scenario: line " + std::to_string(lineno) +
                       ": empty key or value");

    if (section.empty()) {
      if (key == "schema_version") {
        doc.has_version = true;
        doc.version = static_cast<int>(to_double(value, key));
      } else {
        throw ParseError("scenario: line " + std::to_string(lineno) +
                         ": key '" + key + "' outside any section");
      }
    } else if (section == "obstacle") {
      doc.obstacles.back()[key] = value;
    } else {
      doc.kv[section + "." + key] = value;
    }
  }
  if (!doc.has_version)
    throw ParseError("scenario: missing required 'schema_version' key");
  if (doc.version != 1)
    throw ParseError("scenario: unsupported schema_version " +
                     std::to_string(doc.version));
  return doc;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const Options& overrides) {
  RawDoc doc = parse_raw(text);

  // Overrides win over file content for the singleton keys.
  for (const auto& [k, v] : overrides.entries()) {
    const std::string prefix = k.substr(0, k.find('.'));
    if (prefix == "scenario" || prefix == "dynamics" || prefix == "wind" ||
        prefix == "barrier")
      doc.kv[k] = v;
  }

  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = doc.kv.find(key);
    return it == doc.kv.end() ? nullptr : &it->second;
  };
  auto require = [&](const std::string& key) -> const std::string& {
    const std::string* v = get(key);
    if (!v) throw ParseError("scenario: missing required field '" + key + "'");
    return *v;
  };
  auto number_or = [&](const std::string& key, double fallback) {
    const std::string* v = get(key);
    return v ? to_double(*v, key) : fallback;
  };

  Scenario sc;
  sc.name = get("scenario.name") ? *get("scenario.name") : "unnamed";

  const auto start = to_doubles(require("scenario.start"), 4, "scenario.start");
  sc.start = {start[0], start[1], start[2], start[3]};
  const auto goal = to_doubles(require("scenario.goal"), 4, "scenario.goal");
  sc.goal = {goal[0], goal[1], goal[2], goal[3]};
  sc.horizon_T = to_double(require("scenario.horizon_T"), "scenario.horizon_T");
  sc.u_max = number_or("scenario.u_max", 5.0);
  if (const std::string* b = get("scenario.bounds")) {
    const auto v = to_doubles(*b, 4, "scenario.bounds");
    sc.bounds = {v[0], v[1], v[2], v[3]};
  }

  sc.dynamics.c_d = number_or("dynamics.c_d", 0.3);
  sc.dynamics.wind.A_x = number_or("wind.A_x", 0.0);
  sc.dynamics.wind.A_y = number_or("wind.A_y", 0.0);
  sc.dynamics.wind.L_x = number_or("wind.L_x", 10.0);
  sc.dynamics.wind.L_y = number_or("wind.L_y", 10.0);
  sc.barrier.eps = number_or("barrier.eps", 0.01);
  sc.barrier.alpha = number_or("barrier.alpha", 10.0);

  for (std::size_t i = 0; i < doc.obstacles.size(); ++i) {
    const auto& m = doc.obstacles[i];
    const std::string tag = "obstacle[" + std::to_string(i) + "]";
    auto field = [&](const char* k) -> double {
      const auto it = m.find(k);
      if (it == m.end())
        throw ParseError("scenario: " + tag + " missing field '" +
                         std::string(k) + "'");
      return to_double(it->second, tag + "." + k);
    };
    sc.obstacles.push_back({field("cx"), field("cy"), field("r")});
  }

  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path, const Options& overrides) {
  return parse_scenario(read_file(path), overrides);
}

}  // namespace windplan::io
