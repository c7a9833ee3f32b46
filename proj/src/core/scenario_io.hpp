#pragma once

#include <string>

#include "core/environment.hpp"
#include "core/options.hpp"

namespace windplan::io {

/// Parses the sectioned key-value scenario format (see docs/formats.md),
/// applies overrides (which take precedence over file values), fills
/// documented defaults for omitted optional keys, and validates all
/// invariants. Throws ParseError / ConfigError with the offending field
/// named.
Scenario parse_scenario(const std::string& text, const Options& overrides);

Scenario load_scenario(const std::string& path, const Options& overrides);

}  // namespace windplan::io
