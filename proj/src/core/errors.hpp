#pragma once

#include <stdexcept>
#include <string>

namespace windplan {

/// Invalid configuration, scenario, or argument (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input document (scenario file, CSV, checkpoint).
class ParseError : public ConfigError {
 public:
  explicit ParseError(const std::string& msg) : ConfigError(msg) {}
};

/// A planner could not produce a trajectory (maps to CLI exit code 1).
class PlannerError : public std::runtime_error {
 public:
  explicit PlannerError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Training or simulation produced non-finite values.
class DivergenceError : public PlannerError {
 public:
  explicit DivergenceError(const std::string& msg) : PlannerError(msg) {}
};

/// Filesystem-level failure.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace windplan
