#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace windplan {

/// Dotted-key string overrides ("wind.A_x" = "2.0"). Keys are validated
/// against the registry of documented settings so typos fail loudly
/// instead of being silently ignored.
class Options {
 public:
  static bool known_key(const std::string& key);

  /// Throws ConfigError for unknown keys.
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return kv_; }

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace windplan
