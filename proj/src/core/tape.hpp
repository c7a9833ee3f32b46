#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/time_jet.hpp"

namespace windplan::diff {

using NodeId = std::uint32_t;

/// Dense affine layer referencing a slice of the bound parameter vector.
/// Weights are row-major (fan_out x fan_in), followed elsewhere by fan_out
/// biases at b_offset.
struct LinearSpec {
  std::uint32_t w_offset = 0;
  std::uint32_t b_offset = 0;
  std::uint32_t fan_in = 0;
  std::uint32_t fan_out = 0;
};

/// Records an evaluation over first-order time jets and replays it in
/// reverse to accumulate parameter gradients. Values are computed eagerly
/// at record time; backward() may be called repeatedly (with different
/// seeds) before clear().
///
/// Every node carries (value, d/dt) and the reverse pass propagates
/// adjoints for both components, so losses built from dt_part() nodes
/// (physics residuals) differentiate correctly with respect to parameters.
class Tape {
 public:
  void set_params(std::span<const double> params) { params_ = params; }
  std::span<const double> params() const { return params_; }

  void clear();
  std::size_t node_count() const { return vals_.size(); }

  // Leaves.
  NodeId constant(double v);
  NodeId param(std::uint32_t index);
  NodeId time_input(double tau);  // jet (tau, 1)

  // Scalar jet operations.
  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId div(NodeId a, NodeId b);
  NodeId neg(NodeId a);
  NodeId scale(NodeId a, double c);  // a * c
  NodeId shift(NodeId a, double c);  // a + c
  NodeId sin(NodeId a);
  NodeId cos(NodeId a);
  NodeId exp(NodeId a);
  NodeId log(NodeId a);
  NodeId sqrt(NodeId a);
  NodeId square(NodeId a);
  NodeId softplus(NodeId a);
  NodeId recip(NodeId a);

  // Bridges from the jet domain into plain scalars (d/dt pinned to 0).
  NodeId value_part(NodeId a);
  NodeId dt_part(NodeId a);

  // Span operations used by the network evaluation.
  NodeId linear(const LinearSpec& spec, NodeId input_start);
  NodeId sin_span(NodeId input_start, std::uint32_t count, double omega);

  TimeJet val(NodeId id) const { return vals_[id]; }
  double value(NodeId id) const { return vals_[id].value; }

  /// Accumulates seed * d(node)/d(param_k) into grad[k] for every
  /// parameter reachable from `node`. grad must span the full bound
  /// parameter vector; existing contents are added to, not replaced.
  void backward(NodeId node, std::span<double> grad, double seed = 1.0);

 private:
  enum class Op : std::uint8_t {
    kConst, kParam, kTime,
    kAdd, kSub, kMul, kDiv, kNeg, kScale, kShift,
    kSin, kCos, kExp, kLog, kSqrt, kSquare, kSoftplus, kRecip,
    kValuePart, kDtPart,
    kLinear, kSinSpan,
  };
  struct Instr {
    Op op;
    NodeId out;
    NodeId a = 0;
    std::uint32_t b = 0;  // second operand, span length, or param index
    std::uint32_t aux = 0;
  };

  NodeId push(const Instr& in, TimeJet v);
  NodeId alloc(std::uint32_t n);

  std::vector<Instr> instrs_;
  std::vector<TimeJet> vals_;
  std::vector<TimeJet> adj_;
  std::vector<double> auxd_;        // constants (scale/shift), omegas
  std::vector<LinearSpec> auxl_;
  std::vector<double> cos_cache_;   // cos(omega*z) per sin_span element
  std::vector<std::uint32_t> span_cache_off_;
  std::span<const double> params_;
};

/// Small handle enabling expression-style recording; lets the generic
/// wind/barrier formulas run unchanged on tape nodes.
struct TapeRef {
  Tape* tape = nullptr;
  NodeId id = 0;
};

inline TapeRef operator+(TapeRef a, TapeRef b) {
  return {a.tape, a.tape->add(a.id, b.id)};
}
inline TapeRef operator-(TapeRef a, TapeRef b) {
  return {a.tape, a.tape->sub(a.id, b.id)};
}
inline TapeRef operator*(TapeRef a, TapeRef b) {
  return {a.tape, a.tape->mul(a.id, b.id)};
}
inline TapeRef operator/(TapeRef a, TapeRef b) {
  return {a.tape, a.tape->div(a.id, b.id)};
}
inline TapeRef operator-(TapeRef a) { return {a.tape, a.tape->neg(a.id)}; }
inline TapeRef operator*(TapeRef a, double c) {
  return {a.tape, a.tape->scale(a.id, c)};
}
inline TapeRef operator*(double c, TapeRef a) { return a * c; }
inline TapeRef operator/(TapeRef a, double c) { return a * (1.0 / c); }
inline TapeRef operator/(double c, TapeRef a) {
  return {a.tape, a.tape->scale(a.tape->recip(a.id), c)};
}
inline TapeRef operator+(TapeRef a, double c) {
  return {a.tape, a.tape->shift(a.id, c)};
}
inline TapeRef operator+(double c, TapeRef a) { return a + c; }
inline TapeRef operator-(TapeRef a, double c) { return a + (-c); }
inline TapeRef operator-(double c, TapeRef a) {
  return {a.tape, a.tape->shift(a.tape->neg(a.id), c)};
}
inline TapeRef sin(TapeRef a) { return {a.tape, a.tape->sin(a.id)}; }
inline TapeRef cos(TapeRef a) { return {a.tape, a.tape->cos(a.id)}; }
inline TapeRef exp(TapeRef a) { return {a.tape, a.tape->exp(a.id)}; }
inline TapeRef log(TapeRef a) { return {a.tape, a.tape->log(a.id)}; }
inline TapeRef sqrt(TapeRef a) { return {a.tape, a.tape->sqrt(a.id)}; }
inline TapeRef softplus(TapeRef a) {
  return {a.tape, a.tape->softplus(a.id)};
}

}  // namespace windplan::diff
