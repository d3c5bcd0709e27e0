#include "geoharm/adam.hpp"

#include <cmath>
#include <stdexcept>

#include "geoharm/errors.hpp"

namespace geoharm {

void adam_step(Model& model, const Eigen::VectorXd& grads, AdamState& state,
               double learning_rate, double weight_decay) {
  if (grads.size() != model.params.size()) {
    throw std::invalid_argument("adam_step: gradient size mismatch");
  }
  if (!grads.allFinite()) throw numeric_error("adam_step: non-finite gradient");

  if (state.m.size() != grads.size()) {
    state.m.setZero(grads.size());
    state.v.setZero(grads.size());
    state.step = 0;
  }

  if (weight_decay != 0.0) {
    model.params *= 1.0 - learning_rate * weight_decay;
  }

  ++state.step;
  state.m = kAdamBeta1 * state.m + (1.0 - kAdamBeta1) * grads;
  state.v = kAdamBeta2 * state.v + (1.0 - kAdamBeta2) * grads.cwiseProduct(grads);
  const double m_corr = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.step));
  const double v_corr = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.step));

  model.params.array() -=
      learning_rate * (state.m.array() / m_corr) /
      ((state.v.array() / v_corr).sqrt() + kAdamEps);
}

}  // namespace geoharm
