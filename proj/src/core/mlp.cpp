#include "core/mlp.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace windplan::diff {

void MlpConfig::validate() const {
  if (input_dim != 1)
    throw ConfigError("mlp: input_dim must be 1 (scalar time input)");
  if (output_dim < 1) throw ConfigError("mlp: output_dim must be >= 1");
  if (hidden_layers < 1) throw ConfigError("mlp: hidden_layers must be >= 1");
  if (hidden_width < 1) throw ConfigError("mlp: hidden_width must be >= 1");
  if (!(omega0 > 0.0)) throw ConfigError("mlp: omega0 must be > 0");
}

MlpLayout MlpLayout::build(const MlpConfig& cfg) {
  cfg.validate();
  MlpLayout layout;
  std::size_t offset = 0;
  auto push_layer = [&](int fan_in, int fan_out, double omega,
                        bool activated) {
    Layer l;
    l.lin.fan_in = static_cast<std::uint32_t>(fan_in);
    l.lin.fan_out = static_cast<std::uint32_t>(fan_out);
    l.lin.w_offset = static_cast<std::uint32_t>(offset);
    offset += static_cast<std::size_t>(fan_in) * fan_out;
    l.lin.b_offset = static_cast<std::uint32_t>(offset);
    offset += fan_out;
    l.omega = omega;
    l.activated = activated;
    layout.layers.push_back(l);
  };
  push_layer(cfg.input_dim, cfg.hidden_width, cfg.omega0, true);
  for (int k = 1; k < cfg.hidden_layers; ++k)
    push_layer(cfg.hidden_width, cfg.hidden_width, 1.0, true);
  push_layer(cfg.hidden_width, cfg.output_dim, 1.0, false);
  layout.param_count = offset;
  return layout;
}

ParamVector init_params(const MlpConfig& cfg) {
  const MlpLayout layout = MlpLayout::build(cfg);
  ParamVector params(layout.param_count, 0.0);
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t k = 0; k < layout.layers.size(); ++k) {
    const auto& l = layout.layers[k];
    double bound;
    if (cfg.init == MlpConfig::Init::kXavier) {
      bound = std::sqrt(6.0 / (l.lin.fan_in + l.lin.fan_out));
    } else {
      bound = (k == 0) ? 1.0 / l.lin.fan_in : std::sqrt(6.0 / l.lin.fan_in);
    }
    const std::size_t n_w =
        static_cast<std::size_t>(l.lin.fan_in) * l.lin.fan_out;
    for (std::size_t i = 0; i < n_w; ++i)
      params[l.lin.w_offset + i] = uniform_range(rng, -bound, bound);
    // biases stay zero
  }
  return params;
}

std::vector<double> forward(const MlpLayout& layout,
                            std::span<const double> params, double t) {
  std::vector<double> h{t};
  std::vector<double> next;
  for (const auto& l : layout.layers) {
    next.assign(l.lin.fan_out, 0.0);
    const double* w = params.data() + l.lin.w_offset;
    const double* b = params.data() + l.lin.b_offset;
    for (std::uint32_t i = 0; i < l.lin.fan_out; ++i) {
      const double* wi = w + static_cast<std::size_t>(i) * l.lin.fan_in;
      double acc = b[i];
      for (std::uint32_t j = 0; j < l.lin.fan_in; ++j) acc += wi[j] * h[j];
      next[i] = l.activated ? std::sin(l.omega * acc) : acc;
    }
    h.swap(next);
  }
  return h;
}

std::vector<TimeJet> forward_with_dt(const MlpLayout& layout,
                                     std::span<const double> params,
                                     double t) {
  std::vector<TimeJet> h{{t, 1.0}};
  std::vector<TimeJet> next;
  for (const auto& l : layout.layers) {
    next.assign(l.lin.fan_out, TimeJet{});
    const double* w = params.data() + l.lin.w_offset;
    const double* b = params.data() + l.lin.b_offset;
    for (std::uint32_t i = 0; i < l.lin.fan_out; ++i) {
      const double* wi = w + static_cast<std::size_t>(i) * l.lin.fan_in;
      double acc_v = b[i];
      double acc_d = 0.0;
      for (std::uint32_t j = 0; j < l.lin.fan_in; ++j) {
        acc_v += wi[j] * h[j].value;
        acc_d += wi[j] * h[j].d_dt;
      }
      if (l.activated) {
        const double arg = l.omega * acc_v;
        next[i] = {std::sin(arg), std::cos(arg) * l.omega * acc_d};
      } else {
        next[i] = {acc_v, acc_d};
      }
    }
    h.swap(next);
  }
  return h;
}

NodeId record_forward(Tape& tape, const MlpLayout& layout, double tau) {
  NodeId span = tape.time_input(tau);
  for (const auto& l : layout.layers) {
    span = tape.linear(l.lin, span);
    if (l.activated) span = tape.sin_span(span, l.lin.fan_out, l.omega);
  }
  return span;
}

// --- checkpoint io -------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'W', 'P', 'N', 'E', 'T', 'v', '0', '1'};

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64(std::string& buf, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_u64(buf, bits);
}

struct Reader {
  const unsigned char* p;
  const unsigned char* end;
  std::uint32_t u32() {
    require(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    p += 4;
    return v;
  }
  std::uint64_t u64() {
    require(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    p += 8;
    return v;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
  }
  void require(std::size_t n) {
    if (static_cast<std::size_t>(end - p) < n)
      throw ParseError("checkpoint: truncated file");
  }
};

}  // namespace

void save_checkpoint(const std::string& path, const MlpConfig& cfg,
                     std::span<const double> params) {
  std::string buf;
  buf.append(kMagic, sizeof(kMagic));
  put_u32(buf, static_cast<std::uint32_t>(cfg.input_dim));
  put_u32(buf, static_cast<std::uint32_t>(cfg.output_dim));
  put_u32(buf, static_cast<std::uint32_t>(cfg.hidden_layers));
  put_u32(buf, static_cast<std::uint32_t>(cfg.hidden_width));
  put_u32(buf, static_cast<std::uint32_t>(cfg.init));
  put_f64(buf, cfg.omega0);
  put_u64(buf, cfg.seed);
  put_u64(buf, params.size());
  for (double v : params) put_f64(buf, v);

  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("checkpoint: cannot open for writing: " + path);
  const std::size_t written = std::fwrite(buf.data(), 1, buf.size(), f);
  std::fclose(f);
  if (written != buf.size())
    throw IoError("checkpoint: short write: " + path);
}

std::pair<MlpConfig, ParamVector> load_checkpoint(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw IoError("checkpoint: cannot open: " + path);
  std::string buf;
  char chunk[4096];
  std::size_t n;
  while ((n = std::fread(chunk, 1, sizeof(chunk), f)) > 0) buf.append(chunk, n);
  std::fclose(f);

  if (buf.size() < sizeof(kMagic) ||
      std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
    throw ParseError("checkpoint: bad magic (expected WPNETv01)");

  Reader r{reinterpret_cast<const unsigned char*>(buf.data()) + sizeof(kMagic),
           reinterpret_cast<const unsigned char*>(buf.data()) + buf.size()};
  MlpConfig cfg;
  cfg.input_dim = static_cast<int>(r.u32());
  cfg.output_dim = static_cast<int>(r.u32());
  cfg.hidden_layers = static_cast<int>(r.u32());
  cfg.hidden_width = static_cast<int>(r.u32());
  cfg.init = static_cast<MlpConfig::Init>(r.u32());
  cfg.omega0 = r.f64();
  cfg.seed = r.u64();
  cfg.validate();

  const std::uint64_t count = r.u64();
  const MlpLayout layout = MlpLayout::build(cfg);
  if (count != layout.param_count)
    throw ParseError("checkpoint: parameter count does not match topology");
  ParamVector params(count);
  for (std::uint64_t i = 0; i < count; ++i) params[i] = r.f64();
  return {cfg, std::move(params)};
}

}  // namespace windplan::diff
