#pragma once

#include <cstdint>
#include <random>

namespace windplan {

// Uniform draws built directly from mt19937_64 output. std::uniform_*
// distributions are implementation-defined, which would tie reproducibility
// to a particular standard library; these helpers keep seeded runs
// bit-identical everywhere.

inline double uniform01(std::mt19937_64& rng) {
  // 53 random mantissa bits -> [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace windplan
