#pragma once

#include <Eigen/Core>

#include "geoharm/network.hpp"

namespace geoharm {

/// Adam first/second-moment state, lazily sized to the parameter vector.
struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long step = 0;
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;

/// One Adam update with bias correction. Decoupled weight decay shrinks the
/// parameters by (1 - lr*wd) before the moment update is applied. Throws
/// numeric_error on non-finite gradients.
void adam_step(Model& model, const Eigen::VectorXd& grads, AdamState& state,
               double learning_rate, double weight_decay);

}  // namespace geoharm
