#pragma once

#include <Eigen/Core>
#include <vector>

namespace geoharm {

enum class LossKind { SoftmaxCE, BCE, MSE };

/// Targets for one batch; `labels` for classification kinds, `values`
/// (batch x channels) for MSE.
struct TargetsView {
  const std::vector<int>* labels = nullptr;
  const Eigen::MatrixXd* values = nullptr;
};

/// Mean batch loss; when `dpred` is non-null it receives d(loss)/d(predictions).
/// SoftmaxCE expects logits (batch x classes) and class labels; BCE expects a
/// single logit column and {0,1} labels; MSE averages over channels then batch.
double loss_with_grad(LossKind kind, const Eigen::MatrixXd& predictions,
                      const TargetsView& targets, Eigen::MatrixXd* dpred);

inline double loss(LossKind kind, const Eigen::MatrixXd& predictions,
                   const TargetsView& targets) {
  return loss_with_grad(kind, predictions, targets, nullptr);
}

/// Presence-only "assume negative" objective over per-class probabilities:
///   -(1/S) sum_s [ 1[s=pos] * lambda * log(y_s) + 1[s!=pos] * log(1-y_s)
///                  + log(1-y'_s) ]
/// where y' are probabilities at a random location. All probabilities must
/// lie strictly inside (0, 1); the caller applies the sigmoid first.
double assume_negative_loss(const Eigen::VectorXd& probs, int positive_class,
                            const Eigen::VectorXd& probs_rand, double lambda_pos,
                            Eigen::VectorXd* grad_probs = nullptr,
                            Eigen::VectorXd* grad_rand = nullptr);

}  // namespace geoharm
