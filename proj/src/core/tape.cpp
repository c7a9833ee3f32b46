#include "core/tape.hpp"

#include <cassert>
#include <cmath>

#include "core/scalar_math.hpp"

namespace windplan::diff {

void Tape::clear() {
  instrs_.clear();
  vals_.clear();
  auxd_.clear();
  auxl_.clear();
  cos_cache_.clear();
  span_cache_off_.clear();
}

NodeId Tape::push(const Instr& in, TimeJet v) {
  vals_.push_back(v);
  instrs_.push_back(in);
  return in.out;
}

NodeId Tape::alloc(std::uint32_t n) {
  const NodeId first = static_cast<NodeId>(vals_.size());
  vals_.resize(vals_.size() + n);
  return first;
}

NodeId Tape::constant(double v) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  return push({Op::kConst, out}, {v, 0.0});
}

NodeId Tape::param(std::uint32_t index) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  return push({Op::kParam, out, 0, index}, {params_[index], 0.0});
}

NodeId Tape::time_input(double tau) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  return push({Op::kTime, out}, {tau, 1.0});
}

NodeId Tape::add(NodeId a, NodeId b) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  const TimeJet va = vals_[a], vb = vals_[b];
  return push({Op::kAdd, out, a, b}, {va.value + vb.value, va.d_dt + vb.d_dt});
}

NodeId Tape::sub(NodeId a, NodeId b) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  const TimeJet va = vals_[a], vb = vals_[b];
  return push({Op::kSub, out, a, b}, {va.value - vb.value, va.d_dt - vb.d_dt});
}

NodeId Tape::mul(NodeId a, NodeId b) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  const TimeJet va = vals_[a], vb = vals_[b];
  return push({Op::kMul, out, a, b},
              {va.value * vb.value, va.d_dt * vb.value + va.value * vb.d_dt});
}

NodeId Tape::div(NodeId a, NodeId b) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  const TimeJet va = vals_[a], vb = vals_[b];
  const double inv = 1.0 / vb.value;
  const double cv = va.value * inv;
  return push({Op::kDiv, out, a, b}, {cv, (va.d_dt - cv * vb.d_dt) * inv});
}

NodeId Tape::neg(NodeId a) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  const TimeJet va = vals_[a];
  return push({Op::kNeg, out, a}, {-va.value, -va.d_dt});
}

NodeId Tape::scale(NodeId a, double c) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  const std::uint32_t aux = static_cast<std::uint32_t>(auxd_.size());
  auxd_.push_back(c);
  const TimeJet va = vals_[a];
  return push({Op::kScale, out, a, 0, aux}, {va.value * c, va.d_dt * c});
}

NodeId Tape::shift(NodeId a, double c) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  const std::uint32_t aux = static_cast<std::uint32_t>(auxd_.size());
  auxd_.push_back(c);
  const TimeJet va = vals_[a];
  return push({Op::kShift, out, a, 0, aux}, {va.value + c, va.d_dt});
}

NodeId Tape::sin(NodeId a) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  const TimeJet va = vals_[a];
  return push({Op::kSin, out, a},
              {std::sin(va.value), std::cos(va.value) * va.d_dt});
}

NodeId Tape::cos(NodeId a) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  const TimeJet va = vals_[a];
  return push({Op::kCos, out, a},
              {std::cos(va.value), -std::sin(va.value) * va.d_dt});
}

NodeId Tape::exp(NodeId a) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  const TimeJet va = vals_[a];
  const double e = std::exp(va.value);
  return push({Op::kExp, out, a}, {e, e * va.d_dt});
}

NodeId Tape::log(NodeId a) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  const TimeJet va = vals_[a];
  return push({Op::kLog, out, a}, {std::log(va.value), va.d_dt / va.value});
}

NodeId Tape::sqrt(NodeId a) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  const TimeJet va = vals_[a];
  const double s = std::sqrt(va.value);
  return push({Op::kSqrt, out, a}, {s, va.d_dt / (2.0 * s)});
}

NodeId Tape::square(NodeId a) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  const TimeJet va = vals_[a];
  return push({Op::kSquare, out, a},
              {va.value * va.value, 2.0 * va.value * va.d_dt});
}

NodeId Tape::softplus(NodeId a) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  const TimeJet va = vals_[a];
  return push({Op::kSoftplus, out, a},
              {windplan::softplus(va.value),
               windplan::logistic(va.value) * va.d_dt});
}

NodeId Tape::recip(NodeId a) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  const TimeJet va = vals_[a];
  const double inv = 1.0 / va.value;
  return push({Op::kRecip, out, a}, {inv, -inv * inv * va.d_dt});
}

NodeId Tape::value_part(NodeId a) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  return push({Op::kValuePart, out, a}, {vals_[a].value, 0.0});
}

NodeId Tape::dt_part(NodeId a) {
  const NodeId out = static_cast<NodeId>(vals_.size());
  return push({Op::kDtPart, out, a}, {vals_[a].d_dt, 0.0});
}

NodeId Tape::linear(const LinearSpec& spec, NodeId input_start) {
  assert(!params_.empty());
  const NodeId out = alloc(spec.fan_out);
  const std::uint32_t aux = static_cast<std::uint32_t>(auxl_.size());
  auxl_.push_back(spec);
  const double* w = params_.data() + spec.w_offset;
  const double* b = params_.data() + spec.b_offset;
  const TimeJet* h = vals_.data() + input_start;
  TimeJet* o = vals_.data() + out;
  for (std::uint32_t i = 0; i < spec.fan_out; ++i) {
    const double* wi = w + static_cast<std::size_t>(i) * spec.fan_in;
    double acc_v = b[i];
    double acc_d = 0.0;
    for (std::uint32_t j = 0; j < spec.fan_in; ++j) {
      acc_v += wi[j] * h[j].value;
      acc_d += wi[j] * h[j].d_dt;
    }
    o[i] = {acc_v, acc_d};
  }
  instrs_.push_back({Op::kLinear, out, input_start, 0, aux});
  return out;
}

NodeId Tape::sin_span(NodeId input_start, std::uint32_t count, double omega) {
  const NodeId out = alloc(count);
  const std::uint32_t aux = static_cast<std::uint32_t>(auxd_.size());
  auxd_.push_back(omega);
  span_cache_off_.push_back(static_cast<std::uint32_t>(cos_cache_.size()));
  const std::uint32_t cache_slot =
      static_cast<std::uint32_t>(span_cache_off_.size() - 1);
  const TimeJet* z = vals_.data() + input_start;
  TimeJet* o = vals_.data() + out;
  for (std::uint32_t i = 0; i < count; ++i) {
    const double arg = omega * z[i].value;
    const double c = std::cos(arg);
    cos_cache_.push_back(c);
    o[i] = {std::sin(arg), omega * c * z[i].d_dt};
  }
  // b carries the element count; aux points at omega, and the cos cache
  // slot is recovered in order during the reverse sweep.
  instrs_.push_back({Op::kSinSpan, out, input_start, count, aux});
  (void)cache_slot;
  return out;
}

void Tape::backward(NodeId node, std::span<double> grad, double seed) {
  adj_.assign(vals_.size(), TimeJet{0.0, 0.0});
  adj_[node].value = seed;

  // Count sin spans so cache offsets can be walked in reverse.
  std::size_t span_idx = span_cache_off_.size();

  for (std::size_t k = instrs_.size(); k-- > 0;) {
    const Instr& in = instrs_[k];
    const TimeJet ca = adj_[in.out];
    switch (in.op) {
      case Op::kConst:
      case Op::kTime:
        break;
      case Op::kParam:
        grad[in.b] += ca.value;
        break;
      case Op::kAdd: {
        adj_[in.a].value += ca.value;
        adj_[in.a].d_dt += ca.d_dt;
        adj_[in.b].value += ca.value;
        adj_[in.b].d_dt += ca.d_dt;
        break;
      }
      case Op::kSub: {
        adj_[in.a].value += ca.value;
        adj_[in.a].d_dt += ca.d_dt;
        adj_[in.b].value -= ca.value;
        adj_[in.b].d_dt -= ca.d_dt;
        break;
      }
      case Op::kMul: {
        const TimeJet va = vals_[in.a], vb = vals_[in.b];
        adj_[in.a].value += ca.value * vb.value + ca.d_dt * vb.d_dt;
        adj_[in.a].d_dt += ca.d_dt * vb.value;
        adj_[in.b].value += ca.value * va.value + ca.d_dt * va.d_dt;
        adj_[in.b].d_dt += ca.d_dt * va.value;
        break;
      }
      case Op::kDiv: {
        const TimeJet va = vals_[in.a], vb = vals_[in.b];
        const double inv = 1.0 / vb.value;
        const double cv = va.value * inv;
        adj_[in.a].value += ca.value * inv - ca.d_dt * vb.d_dt * inv * inv;
        adj_[in.a].d_dt += ca.d_dt * inv;
        adj_[in.b].value +=
            -ca.value * cv * inv +
            ca.d_dt * (-va.d_dt + 2.0 * cv * vb.d_dt) * inv * inv;
        adj_[in.b].d_dt += -ca.d_dt * cv * inv;
        break;
      }
      case Op::kNeg: {
        adj_[in.a].value -= ca.value;
        adj_[in.a].d_dt -= ca.d_dt;
        break;
      }
      case Op::kScale: {
        const double c = auxd_[in.aux];
        adj_[in.a].value += ca.value * c;
        adj_[in.a].d_dt += ca.d_dt * c;
        break;
      }
      case Op::kShift: {
        adj_[in.a].value += ca.value;
        adj_[in.a].d_dt += ca.d_dt;
        break;
      }
      case Op::kSin: {
        const TimeJet va = vals_[in.a];
        const double c = std::cos(va.value);
        const double s = vals_[in.out].value;
        adj_[in.a].value += ca.value * c - ca.d_dt * s * va.d_dt;
        adj_[in.a].d_dt += ca.d_dt * c;
        break;
      }
      case Op::kCos: {
        const TimeJet va = vals_[in.a];
        const double c = vals_[in.out].value;
        const double s = std::sin(va.value);
        adj_[in.a].value += -ca.value * s - ca.d_dt * c * va.d_dt;
        adj_[in.a].d_dt += -ca.d_dt * s;
        break;
      }
      case Op::kExp: {
        const double e = vals_[in.out].value;
        const TimeJet va = vals_[in.a];
        adj_[in.a].value += ca.value * e + ca.d_dt * e * va.d_dt;
        adj_[in.a].d_dt += ca.d_dt * e;
        break;
      }
      case Op::kLog: {
        const TimeJet va = vals_[in.a];
        const double inv = 1.0 / va.value;
        adj_[in.a].value += ca.value * inv - ca.d_dt * va.d_dt * inv * inv;
        adj_[in.a].d_dt += ca.d_dt * inv;
        break;
      }
      case Op::kSqrt: {
        const TimeJet va = vals_[in.a];
        const double half = 0.5 / vals_[in.out].value;
        adj_[in.a].value +=
            ca.value * half - ca.d_dt * va.d_dt * half / (2.0 * va.value);
        adj_[in.a].d_dt += ca.d_dt * half;
        break;
      }
      case Op::kSquare: {
        const TimeJet va = vals_[in.a];
        adj_[in.a].value += 2.0 * (ca.value * va.value + ca.d_dt * va.d_dt);
        adj_[in.a].d_dt += 2.0 * ca.d_dt * va.value;
        break;
      }
      case Op::kSoftplus: {
        const TimeJet va = vals_[in.a];
        const double sig = windplan::logistic(va.value);
        adj_[in.a].value +=
            ca.value * sig + ca.d_dt * sig * (1.0 - sig) * va.d_dt;
        adj_[in.a].d_dt += ca.d_dt * sig;
        break;
      }
      case Op::kRecip: {
        const TimeJet va = vals_[in.a];
        const double inv = vals_[in.out].value;
        const double inv2 = inv * inv;
        adj_[in.a].value +=
            -ca.value * inv2 + ca.d_dt * 2.0 * inv2 * inv * va.d_dt;
        adj_[in.a].d_dt += -ca.d_dt * inv2;
        break;
      }
      case Op::kValuePart:
        adj_[in.a].value += ca.value;
        break;
      case Op::kDtPart:
        adj_[in.a].d_dt += ca.value;
        break;
      case Op::kLinear: {
        const LinearSpec& spec = auxl_[in.aux];
        const double* w = params_.data() + spec.w_offset;
        const TimeJet* h = vals_.data() + in.a;
        const TimeJet* oa = adj_.data() + in.out;
        TimeJet* ha = adj_.data() + in.a;
        double* gw = grad.data() + spec.w_offset;
        double* gb = grad.data() + spec.b_offset;
        for (std::uint32_t i = 0; i < spec.fan_out; ++i) {
          const double oav = oa[i].value;
          const double oad = oa[i].d_dt;
          gb[i] += oav;
          const double* wi = w + static_cast<std::size_t>(i) * spec.fan_in;
          double* gwi = gw + static_cast<std::size_t>(i) * spec.fan_in;
          for (std::uint32_t j = 0; j < spec.fan_in; ++j) {
            ha[j].value += wi[j] * oav;
            ha[j].d_dt += wi[j] * oad;
            gwi[j] += oav * h[j].value + oad * h[j].d_dt;
          }
        }
        break;
      }
      case Op::kSinSpan: {
        --span_idx;
        const double omega = auxd_[in.aux];
        const double* cc = cos_cache_.data() + span_cache_off_[span_idx];
        const TimeJet* z = vals_.data() + in.a;
        const TimeJet* o = vals_.data() + in.out;
        const TimeJet* oa = adj_.data() + in.out;
        TimeJet* za = adj_.data() + in.a;
        for (std::uint32_t i = 0; i < in.b; ++i) {
          const double wc = omega * cc[i];
          za[i].value += oa[i].value * wc -
                         oa[i].d_dt * omega * omega * o[i].value * z[i].d_dt;
          za[i].d_dt += oa[i].d_dt * wc;
        }
        break;
      }
    }
    // Multi-output span instructions read adjoints directly above; for the
    // single-output ops nothing else is needed.
  }
}

}  // namespace windplan::diff
