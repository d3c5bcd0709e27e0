#include "geoharm/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "geoharm/csv.hpp"
#include "geoharm/errors.hpp"
#include "geoharm/rng.hpp"
#include "geoharm/spherical_harmonics.hpp"

namespace geoharm {

DatasetBundle build_checkerboard(int num_centers, int num_classes, int n_train,
                                 int n_val, int n_test, std::uint64_t seed) {
  if (num_centers < 1 || num_classes < 1 || num_classes > num_centers) {
    throw std::invalid_argument("build_checkerboard: need 1 <= num_classes <= num_centers");
  }
  if (n_train < 1 || n_val < 1 || n_test < 1) {
    throw std::invalid_argument("build_checkerboard: split sizes must be positive");
  }

  const PointSet centers = fibonacci_lattice_count(num_centers);
  std::vector<int> center_labels(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    center_labels[i] = static_cast<int>(i) % num_classes;
  }

  DatasetBundle bundle;
  bundle.task = TaskKind::Multiclass;
  bundle.arity = num_classes;
  bundle.train.points = uniform_sphere_sample(n_train, mix_seed(seed, 1));
  bundle.val.points = uniform_sphere_sample(n_val, mix_seed(seed, 2));
  bundle.test.points = fibonacci_lattice_count(n_test);
  for (DatasetSplit* split : {&bundle.train, &bundle.val, &bundle.test}) {
    split->labels = nearest_center_labels(split->points, centers, center_labels);
  }
  return bundle;
}

double mean_center_spacing(int num_centers) {
  if (num_centers < 2) throw std::invalid_argument("mean_center_spacing: need >= 2 centers");
  const PointSet centers = fibonacci_lattice_count(num_centers);
  double total = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centers.size(); ++j) {
      if (i == j) continue;
      nearest = std::min(nearest, haversine(centers[i], centers[j]));
    }
    total += nearest;
  }
  return total / static_cast<double>(centers.size()) * kDegPerRad;
}

SynthField synth_field_bundle(int channels, int truth_degree, int n_train,
                              int n_val, int n_test, std::uint64_t seed) {
  if (channels < 1) throw std::invalid_argument("synth_field_bundle: channels >= 1");
  if (truth_degree < 1) throw std::invalid_argument("synth_field_bundle: truth_degree >= 1");
  if (n_train < 1 || n_val < 1 || n_test < 1) {
    throw std::invalid_argument("synth_field_bundle: split sizes must be positive");
  }

  const int dim = truth_degree * truth_degree;
  Rng rng(mix_seed(seed, 0xf1e1d));
  Eigen::MatrixXd coeffs(channels, dim);
  for (int c = 0; c < channels; ++c) {
    for (int l = 0; l < truth_degree; ++l) {
      for (int m = -l; m <= l; ++m) {
        coeffs(c, l * l + l + m) = rng.normal() / (1.0 + l);
      }
    }
  }

  const CompiledBasis basis = compile_basis(truth_degree);
  auto field_values = [&](const PointSet& points) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(points.size()), channels);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::vector<double> y = sh_embed(basis, points[i]);
      const Eigen::Map<const Eigen::VectorXd> yv(y.data(), dim);
      out.row(static_cast<Eigen::Index>(i)) = (coeffs * yv).transpose();
    }
    return out;
  };

  SynthField result;
  result.coefficients = coeffs;
  DatasetBundle& bundle = result.bundle;
  bundle.task = TaskKind::Regression;
  bundle.arity = channels;
  bundle.train.points = uniform_sphere_sample(n_train, mix_seed(seed, 11));
  bundle.val.points = uniform_sphere_sample(n_val, mix_seed(seed, 12));
  bundle.test.points = uniform_sphere_sample(n_test, mix_seed(seed, 13));
  bundle.train.values = field_values(bundle.train.points);
  bundle.val.values = field_values(bundle.val.points);
  bundle.test.values = field_values(bundle.test.points);

  // Standardize every channel with the train statistics; a constant channel
  // keeps scale 1 so its standardized values are exactly zero.
  for (int c = 0; c < channels; ++c) {
    const double mean = bundle.train.values.col(c).mean();
    const double var =
        (bundle.train.values.col(c).array() - mean).square().mean();
    const double scale = var > 1e-24 ? 1.0 / std::sqrt(var) : 1.0;
    for (DatasetSplit* split : {&bundle.train, &bundle.val, &bundle.test}) {
      split->values.col(c) = (split->values.col(c).array() - mean) * scale;
    }
  }
  return result;
}

void write_split_csv(const DatasetSplit& split, TaskKind task, std::ostream& out) {
  const int targets =
      task == TaskKind::Regression ? static_cast<int>(split.values.cols()) : 1;
  out << "lon_deg,lat_deg";
  if (targets == 1) {
    out << ",target";
  } else {
    for (int c = 0; c < targets; ++c) out << ",target" << c;
  }
  out << "\n";
  char buf[64];
  for (std::size_t i = 0; i < split.points.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g", split.points[i].lon * kDegPerRad,
                  split.points[i].lat * kDegPerRad);
    out << buf;
    if (task == TaskKind::Regression) {
      for (int c = 0; c < targets; ++c) {
        std::snprintf(buf, sizeof(buf), ",%.17g",
                      split.values(static_cast<Eigen::Index>(i), c));
        out << buf;
      }
    } else {
      out << ',' << split.labels[i];
    }
    out << "\n";
  }
}

void read_split_csv(std::istream& in, PointSet& points, Eigen::MatrixXd& targets) {
  std::string header;
  if (!std::getline(in, header)) throw parse_error("split csv: missing header");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const auto fields = split_csv_line(header);
  if (fields.size() < 3 || fields[0] != "lon_deg" || fields[1] != "lat_deg") {
    throw parse_error("split csv: unexpected header '" + header + "'");
  }
  const std::size_t n_targets = fields.size() - 2;

  points.clear();
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != fields.size()) {
      throw parse_error("split csv line " + std::to_string(line_no) +
                        ": wrong field count");
    }
    std::vector<double> row;
    for (const auto& cell : cells) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw parse_error("split csv line " + std::to_string(line_no) +
                          ": non-numeric field '" + cell + "'");
      }
    }
    points.push_back(point_from_degrees(row[0], row[1]));
    rows.push_back(std::vector<double>(row.begin() + 2, row.end()));
  }

  targets.resize(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(n_targets));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < n_targets; ++c) {
      targets(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    }
  }
}

}  // namespace geoharm
