#include "core/adam.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace windplan::diff {

AdamState AdamState::init(std::size_t n, const AdamConfig& cfg) {
  AdamState st;
  st.cfg = cfg;
  st.m.assign(n, 0.0);
  st.v.assign(n, 0.0);
  return st;
}

void adam_step(AdamState& st, std::span<double> params,
               std::span<const double> grads) {
  const std::size_t n = st.m.size();
  if (params.size() != n || grads.size() != n)
    throw ConfigError("adam_step: parameter/gradient shape mismatch");

  ++st.step;
  const double b1 = st.cfg.beta1;
  const double b2 = st.cfg.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(st.step));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(st.step));
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grads[i];
    st.m[i] = b1 * st.m[i] + (1.0 - b1) * g;
    st.v[i] = b2 * st.v[i] + (1.0 - b2) * g * g;
    const double m_hat = st.m[i] / corr1;
    const double v_hat = st.v[i] / corr2;
    params[i] -= st.cfg.learning_rate * m_hat / (std::sqrt(v_hat) + st.cfg.eps);
  }
}

}  // namespace windplan::diff
