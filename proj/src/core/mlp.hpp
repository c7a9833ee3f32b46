#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/tape.hpp"
#include "core/time_jet.hpp"

namespace windplan::diff {

/// Sine-activated MLP mapping normalized time to the six trajectory
/// channels (x, y, vx, vy, ux, uy). Hidden layers apply
/// sin(omega * (W h + b)); the output layer is affine. omega is omega0 on
/// the first layer and 1 afterwards.
struct MlpConfig {
  int input_dim = 1;  // the network is a function of scalar time
  int output_dim = 6;
  int hidden_layers = 4;
  int hidden_width = 64;
  double omega0 = 30.0;
  std::uint64_t seed = 0;
  enum class Init : std::uint8_t { kXavier = 0, kSiren = 1 };
  Init init = Init::kXavier;

  void validate() const;  // throws ConfigError
};

using ParamVector = std::vector<double>;

/// Flattened parameter addressing for a given topology.
struct MlpLayout {
  struct Layer {
    LinearSpec lin;
    double omega = 1.0;
    bool activated = true;
  };
  std::vector<Layer> layers;
  std::size_t param_count = 0;

  static MlpLayout build(const MlpConfig& cfg);

  std::size_t weight_index(std::size_t layer, std::size_t out,
                           std::size_t in) const {
    const Layer& l = layers[layer];
    return l.lin.w_offset + out * l.lin.fan_in + in;
  }
  std::size_t bias_index(std::size_t layer, std::size_t out) const {
    return layers[layer].lin.b_offset + out;
  }
};

/// Seed-deterministic initialization: weights uniform in
/// +-sqrt(6/(fan_in+fan_out)), biases zero. The kSiren variant draws the
/// first layer in +-1/fan_in and deeper layers in +-sqrt(6/fan_in).
ParamVector init_params(const MlpConfig& cfg);

std::vector<double> forward(const MlpLayout& layout,
                            std::span<const double> params, double t);

/// Forward pass over time jets: values match forward(), d_dt carries the
/// derivative with respect to the input.
std::vector<TimeJet> forward_with_dt(const MlpLayout& layout,
                                     std::span<const double> params, double t);

/// Records the same evaluation on a tape (parameters must already be
/// bound). Returns the id of the first output node; the output_dim nodes
/// are contiguous.
NodeId record_forward(Tape& tape, const MlpLayout& layout, double tau);

// Checkpoint file: fixed little-endian layout with topology header and
// version tag (see docs/formats.md).
void save_checkpoint(const std::string& path, const MlpConfig& cfg,
                     std::span<const double> params);
std::pair<MlpConfig, ParamVector> load_checkpoint(const std::string& path);

}  // namespace windplan::diff
