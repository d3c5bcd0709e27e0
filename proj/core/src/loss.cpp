#include "geoharm/loss.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace geoharm {

namespace {

double stable_softplus(double z) {
  // log(1 + e^z) without overflow.
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double softmax_ce(const Eigen::MatrixXd& logits, const std::vector<int>& labels,
                  Eigen::MatrixXd* dpred) {
  const Eigen::Index batch = logits.rows();
  const Eigen::Index classes = logits.cols();
  if (static_cast<std::size_t>(batch) != labels.size()) {
    throw std::invalid_argument("softmax_ce: batch/label size mismatch");
  }
  if (dpred) dpred->resize(batch, classes);
  double total = 0.0;
  for (Eigen::Index i = 0; i < batch; ++i) {
    const int label = labels[static_cast<std::size_t>(i)];
    if (label < 0 || label >= classes) {
      throw std::invalid_argument("softmax_ce: label out of range");
    }
    const double zmax = logits.row(i).maxCoeff();
    const Eigen::ArrayXd shifted = logits.row(i).array() - zmax;
    const Eigen::ArrayXd ex = shifted.exp();
    const double denom = ex.sum();
    total += std::log(denom) - shifted(label);
    if (dpred) {
      dpred->row(i) = (ex / denom).matrix().transpose() / static_cast<double>(batch);
      (*dpred)(i, label) -= 1.0 / static_cast<double>(batch);
    }
  }
  return total / static_cast<double>(batch);
}

double bce(const Eigen::MatrixXd& logits, const std::vector<int>& labels,
           Eigen::MatrixXd* dpred) {
  if (logits.cols() != 1) {
    throw std::invalid_argument("bce: expected a single logit column");
  }
  const Eigen::Index batch = logits.rows();
  if (static_cast<std::size_t>(batch) != labels.size()) {
    throw std::invalid_argument("bce: batch/label size mismatch");
  }
  if (dpred) dpred->resize(batch, 1);
  double total = 0.0;
  for (Eigen::Index i = 0; i < batch; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    if (y != 0 && y != 1) throw std::invalid_argument("bce: labels must be 0/1");
    const double z = logits(i, 0);
    total += stable_softplus(z) - y * z;
    if (dpred) {
      const double sig = 1.0 / (1.0 + std::exp(-z));
      (*dpred)(i, 0) = (sig - y) / static_cast<double>(batch);
    }
  }
  return total / static_cast<double>(batch);
}

double mse(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target,
           Eigen::MatrixXd* dpred) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    throw std::invalid_argument("mse: shape mismatch");
  }
  const double scale = 1.0 / (static_cast<double>(pred.rows()) *
                              static_cast<double>(pred.cols()));
  const Eigen::MatrixXd diff = pred - target;
  if (dpred) *dpred = 2.0 * scale * diff;
  return scale * diff.squaredNorm();
}

}  // namespace

double loss_with_grad(LossKind kind, const Eigen::MatrixXd& predictions,
                      const TargetsView& targets, Eigen::MatrixXd* dpred) {
  switch (kind) {
    case LossKind::SoftmaxCE:
      if (!targets.labels) throw std::invalid_argument("loss: missing labels");
      return softmax_ce(predictions, *targets.labels, dpred);
    case LossKind::BCE:
      if (!targets.labels) throw std::invalid_argument("loss: missing labels");
      return bce(predictions, *targets.labels, dpred);
    case LossKind::MSE:
      if (!targets.values) throw std::invalid_argument("loss: missing values");
      return mse(predictions, *targets.values, dpred);
  }
  throw std::invalid_argument("loss: bad kind");
}

double assume_negative_loss(const Eigen::VectorXd& probs, int positive_class,
                            const Eigen::VectorXd& probs_rand, double lambda_pos,
                            Eigen::VectorXd* grad_probs,
                            Eigen::VectorXd* grad_rand) {
  const Eigen::Index classes = probs.size();
  if (probs_rand.size() != classes) {
    throw std::invalid_argument("assume_negative_loss: size mismatch");
  }
  if (positive_class < 0 || positive_class >= classes) {
    throw std::invalid_argument("assume_negative_loss: positive class out of range");
  }
  for (Eigen::Index s = 0; s < classes; ++s) {
    if (!(probs(s) > 0.0 && probs(s) < 1.0) ||
        !(probs_rand(s) > 0.0 && probs_rand(s) < 1.0)) {
      throw std::invalid_argument(
          "assume_negative_loss: probabilities must lie in (0, 1)");
    }
  }
  const double inv_s = 1.0 / static_cast<double>(classes);
  if (grad_probs) grad_probs->setZero(classes);
  if (grad_rand) grad_rand->setZero(classes);
  double total = 0.0;
  for (Eigen::Index s = 0; s < classes; ++s) {
    if (s == positive_class) {
      total += lambda_pos * std::log(probs(s));
      if (grad_probs) (*grad_probs)(s) = -inv_s * lambda_pos / probs(s);
    } else {
      total += std::log1p(-probs(s));
      if (grad_probs) (*grad_probs)(s) = inv_s / (1.0 - probs(s));
    }
    total += std::log1p(-probs_rand(s));
    if (grad_rand) (*grad_rand)(s) = inv_s / (1.0 - probs_rand(s));
  }
  return -inv_s * total;
}

}  // namespace geoharm
