#include "geoharm/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "geoharm/adam.hpp"
#include "geoharm/csv.hpp"
#include "geoharm/errors.hpp"
#include "geoharm/rng.hpp"

namespace geoharm {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("config: learning_rate must be > 0");
  if (weight_decay < 0.0) throw std::invalid_argument("config: weight_decay must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("config: batch_size must be >= 1");
  if (max_epochs < 1) throw std::invalid_argument("config: max_epochs must be >= 1");
  if (patience < 1 || patience > max_epochs) {
    throw std::invalid_argument("config: need 1 <= patience <= max_epochs");
  }
  if (!(lambda_pos > 0.0)) throw std::invalid_argument("config: lambda_pos must be > 0");
}

TrainConfig parse_train_config(std::istream& in) {
  TrainConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw parse_error("config line " + std::to_string(line_no) +
                        ": expected key=value");
    }
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "learning_rate") {
        cfg.learning_rate = std::stod(value);
      } else if (key == "weight_decay") {
        cfg.weight_decay = std::stod(value);
      } else if (key == "batch_size") {
        cfg.batch_size = std::stoi(value);
      } else if (key == "max_epochs") {
        cfg.max_epochs = std::stoi(value);
      } else if (key == "patience") {
        cfg.patience = std::stoi(value);
      } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
      } else if (key == "lambda_pos") {
        cfg.lambda_pos = std::stod(value);
      } else if (key == "loss") {
        if (value == "ce") {
          cfg.loss_kind = LossKind::SoftmaxCE;
        } else if (value == "bce") {
          cfg.loss_kind = LossKind::BCE;
        } else if (value == "mse") {
          cfg.loss_kind = LossKind::MSE;
        } else if (value == "auto") {
          cfg.loss_kind.reset();
        } else {
          throw parse_error("config: unknown loss '" + value + "'");
        }
      } else {
        throw parse_error("config line " + std::to_string(line_no) +
                          ": unknown key '" + key + "'");
      }
    } catch (const parse_error&) {
      throw;
    } catch (const std::exception&) {
      throw parse_error("config line " + std::to_string(line_no) +
                        ": bad value for '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

TrainConfig load_train_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open config: " + path);
  return parse_train_config(in);
}

LossKind default_loss(TaskKind task) {
  switch (task) {
    case TaskKind::Multiclass: return LossKind::SoftmaxCE;
    case TaskKind::Binary: return LossKind::BCE;
    case TaskKind::Regression: return LossKind::MSE;
  }
  throw std::invalid_argument("default_loss: bad task");
}

namespace {

struct BatchTargets {
  std::vector<int> labels;
  Eigen::MatrixXd values;

  TargetsView view(TaskKind task) const {
    TargetsView v;
    if (task == TaskKind::Regression) {
      v.values = &values;
    } else {
      v.labels = &labels;
    }
    return v;
  }
};

void gather(const DatasetSplit& split, TaskKind task,
            const std::vector<std::size_t>& order, std::size_t begin,
            std::size_t end, const Eigen::MatrixXd& embedded, Eigen::MatrixXd& x,
            BatchTargets& t) {
  const std::size_t n = end - begin;
  x.resize(static_cast<Eigen::Index>(n), embedded.cols());
  if (task == TaskKind::Regression) {
    t.values.resize(static_cast<Eigen::Index>(n), split.values.cols());
  } else {
    t.labels.resize(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = order[begin + i];
    x.row(static_cast<Eigen::Index>(i)) = embedded.row(static_cast<Eigen::Index>(src));
    if (task == TaskKind::Regression) {
      t.values.row(static_cast<Eigen::Index>(i)) =
          split.values.row(static_cast<Eigen::Index>(src));
    } else {
      t.labels[i] = split.labels[src];
    }
  }
}

BatchTargets whole_split_targets(const DatasetSplit& split, TaskKind task) {
  BatchTargets t;
  if (task == TaskKind::Regression) {
    t.values = split.values;
  } else {
    t.labels = split.labels;
  }
  return t;
}

}  // namespace

FitResult fit(const DatasetBundle& bundle, const EmbeddingSpec& pe,
              NetworkSpec nn, const TrainConfig& cfg) {
  cfg.validate();
  if (bundle.train.size() == 0 || bundle.val.size() == 0) {
    throw std::invalid_argument("fit: train and val splits must be nonempty");
  }

  const LossKind kind = cfg.loss_kind.value_or(default_loss(bundle.task));
  const Embedder embedder(pe);
  nn.in_dim = embedder.dim();
  nn.out_dim = bundle.task == TaskKind::Regression ? bundle.arity
               : bundle.task == TaskKind::Binary   ? 1
                                                   : bundle.arity;
  nn.validate();

  const Eigen::MatrixXd x_train = embedder.embed_matrix(bundle.train.points);
  const Eigen::MatrixXd x_val = embedder.embed_matrix(bundle.val.points);
  const BatchTargets val_targets = whole_split_targets(bundle.val, bundle.task);

  Model model = init(nn, mix_seed(cfg.seed, 0x111));
  AdamState opt;

  FitResult result;
  result.model = model;
  double best_val = std::numeric_limits<double>::infinity();
  int epochs_since_best = 0;

  std::vector<std::size_t> order(bundle.train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  Eigen::MatrixXd xb;
  BatchTargets tb;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    Rng shuffle_rng(mix_seed(cfg.seed, 0x5f17, static_cast<std::uint64_t>(epoch)));
    shuffle_rng.shuffle(order);

    double train_loss = 0.0;
    std::size_t seen = 0;
    const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);
    for (std::size_t begin = 0, b = 0; begin < order.size(); begin += batch, ++b) {
      const std::size_t end = std::min(begin + batch, order.size());
      gather(bundle.train, bundle.task, order, begin, end, x_train, xb, tb);
      const std::uint64_t drop_seed =
          mix_seed(cfg.seed, static_cast<std::uint64_t>(epoch), b);
      BackwardResult back =
          backward(model, xb, tb.view(bundle.task), kind, true, drop_seed);
      adam_step(model, back.grad, opt, cfg.learning_rate, cfg.weight_decay);
      train_loss += back.loss * static_cast<double>(end - begin);
      seen += end - begin;
    }
    train_loss /= static_cast<double>(seen);

    const double val_loss =
        loss_on_batch(model, x_val, val_targets.view(bundle.task), kind, false, 0);
    result.history.push_back(EpochStats{train_loss, val_loss});
    if (!std::isfinite(val_loss)) {
      throw numeric_error("fit: validation loss diverged at epoch " +
                          std::to_string(epoch));
    }

    if (val_loss < best_val) {
      best_val = val_loss;
      result.best_epoch = epoch;
      result.model.params = model.params;
      epochs_since_best = 0;
    } else {
      ++epochs_since_best;
      if (epochs_since_best >= cfg.patience) {
        result.stopped_early = true;
        break;
      }
    }
  }
  return result;
}

void write_history_csv(const std::vector<EpochStats>& history, std::ostream& out) {
  out << "epoch,train_loss,val_loss\n";
  char buf[96];
  for (std::size_t e = 0; e < history.size(); ++e) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", e, history[e].train_loss,
                  history[e].val_loss);
    out << buf;
  }
}

std::vector<EpochStats> read_history_csv(std::istream& in) {
  CsvReader reader(in, {"epoch", "train_loss", "val_loss"});
  std::vector<EpochStats> history;
  std::vector<double> row;
  while (reader.next_row(row)) {
    history.push_back(EpochStats{row[1], row[2]});
  }
  return history;
}

Eigen::MatrixXd predict(const Model& model, const Embedder& embedder,
                        const PointSet& points) {
  return forward_batch(model, embedder.embed_matrix(points), false, 0, nullptr);
}

namespace {

bool prediction_matches(const Eigen::MatrixXd& y, Eigen::Index row, TaskKind task,
                        int label) {
  if (task == TaskKind::Binary) {
    return (y(row, 0) > 0.0 ? 1 : 0) == label;
  }
  Eigen::Index argmax = 0;
  y.row(row).maxCoeff(&argmax);
  return static_cast<int>(argmax) == label;
}

}  // namespace

double evaluate_accuracy(const Model& model, const Embedder& embedder,
                         const DatasetSplit& split, TaskKind task) {
  if (split.size() == 0) throw std::invalid_argument("evaluate_accuracy: empty split");
  if (task == TaskKind::Regression) {
    throw std::invalid_argument("evaluate_accuracy: regression task");
  }
  const Eigen::MatrixXd y = predict(model, embedder, split.points);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < split.size(); ++i) {
    hits += prediction_matches(y, static_cast<Eigen::Index>(i), task, split.labels[i]);
  }
  return static_cast<double>(hits) / static_cast<double>(split.size());
}

double evaluate_mse(const Model& model, const Embedder& embedder,
                    const DatasetSplit& split) {
  if (split.size() == 0) throw std::invalid_argument("evaluate_mse: empty split");
  const Eigen::MatrixXd y = predict(model, embedder, split.points);
  TargetsView targets;
  targets.values = &split.values;
  return loss(LossKind::MSE, y, targets);
}

std::vector<LatitudeBand> banded_accuracy(const Model& model,
                                          const Embedder& embedder,
                                          const DatasetSplit& split, TaskKind task,
                                          int band_deg) {
  if (split.size() == 0) throw std::invalid_argument("banded_accuracy: empty split");
  if (task == TaskKind::Regression) {
    throw std::invalid_argument("banded_accuracy: regression task");
  }
  if (band_deg < 1 || 180 % band_deg != 0) {
    throw std::invalid_argument("banded_accuracy: band must divide 180");
  }
  const int n_bands = 180 / band_deg;
  std::vector<LatitudeBand> bands(static_cast<std::size_t>(n_bands));
  for (int b = 0; b < n_bands; ++b) {
    bands[static_cast<std::size_t>(b)].south_deg = -90.0 + b * band_deg;
    bands[static_cast<std::size_t>(b)].north_deg = -90.0 + (b + 1) * band_deg;
  }

  const Eigen::MatrixXd y = predict(model, embedder, split.points);
  std::vector<int> hits(static_cast<std::size_t>(n_bands), 0);
  for (std::size_t i = 0; i < split.size(); ++i) {
    const double lat_deg = split.points[i].lat * kDegPerRad;
    int b = static_cast<int>(std::floor((lat_deg + 90.0) / band_deg));
    b = std::clamp(b, 0, n_bands - 1);  // +90 goes into the northernmost band
    auto& band = bands[static_cast<std::size_t>(b)];
    band.n_points += 1;
    hits[static_cast<std::size_t>(b)] +=
        prediction_matches(y, static_cast<Eigen::Index>(i), task, split.labels[i]);
  }
  for (int b = 0; b < n_bands; ++b) {
    auto& band = bands[static_cast<std::size_t>(b)];
    band.accuracy = band.n_points > 0
                        ? static_cast<double>(hits[static_cast<std::size_t>(b)]) /
                              band.n_points
                        : 0.0;
  }
  return bands;
}

}  // namespace geoharm
