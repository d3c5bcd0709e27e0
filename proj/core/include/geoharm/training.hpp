#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "geoharm/dataset.hpp"
#include "geoharm/embedding.hpp"
#include "geoharm/loss.hpp"
#include "geoharm/network.hpp"

namespace geoharm {

struct TrainConfig {
  double learning_rate = 1e-3;
  double weight_decay = 0.0;
  int batch_size = 512;
  int max_epochs = 300;
  int patience = 30;
  std::uint64_t seed = 0;
  std::optional<LossKind> loss_kind;  // empty: derived from the task
  double lambda_pos = 1.0;            // assume-negative positive-term weight

  void validate() const;
};

/// Plain-text key=value config ('#' starts a comment). Keys: learning_rate,
/// weight_decay, batch_size, max_epochs, patience, seed, loss (ce|bce|mse|
/// auto), lambda_pos. Unknown keys are errors.
TrainConfig parse_train_config(std::istream& in);
TrainConfig load_train_config(const std::string& path);

struct EpochStats {
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct FitResult {
  Model model;  // parameters of the best validation epoch
  std::vector<EpochStats> history;
  int best_epoch = 0;
  bool stopped_early = false;
};

LossKind default_loss(TaskKind task);

/// Trains a head on top of a fixed positional embedding. Embeddings are
/// precomputed once per split; mini-batches are reshuffled every epoch;
/// training stops once the validation loss has not improved for `patience`
/// epochs. Throws numeric_error (with the epoch) if validation diverges.
FitResult fit(const DatasetBundle& bundle, const EmbeddingSpec& pe,
              NetworkSpec nn, const TrainConfig& cfg);

/// `epoch,train_loss,val_loss` CSV.
void write_history_csv(const std::vector<EpochStats>& history, std::ostream& out);
std::vector<EpochStats> read_history_csv(std::istream& in);

/// Eval-mode predictions for a whole split (one row per point).
Eigen::MatrixXd predict(const Model& model, const Embedder& embedder,
                        const PointSet& points);

/// Argmax (multiclass) or logit-sign (binary) match rate.
double evaluate_accuracy(const Model& model, const Embedder& embedder,
                         const DatasetSplit& split, TaskKind task);

/// MSE averaged over channels then points.
double evaluate_mse(const Model& model, const Embedder& embedder,
                    const DatasetSplit& split);

struct LatitudeBand {
  double south_deg = 0.0;
  double north_deg = 0.0;
  double accuracy = 0.0;
  int n_points = 0;
};

/// Accuracy per latitude band of `band_deg` degrees from south to north;
/// band_deg must divide 180. The northernmost band is closed at +90.
std::vector<LatitudeBand> banded_accuracy(const Model& model,
                                          const Embedder& embedder,
                                          const DatasetSplit& split, TaskKind task,
                                          int band_deg);

}  // namespace geoharm
