#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "geoharm/geometry.hpp"

namespace geoharm {

enum class TaskKind : int { Multiclass = 0, Binary = 1, Regression = 2 };

/// One split: classification tasks fill `labels`, regression fills `values`
/// (one row per point, one column per channel).
struct DatasetSplit {
  PointSet points;
  std::vector<int> labels;
  Eigen::MatrixXd values;

  std::size_t size() const { return points.size(); }
};

struct DatasetBundle {
  TaskKind task = TaskKind::Multiclass;
  int arity = 1;  // classes (multiclass), 1 (binary), channels (regression)
  DatasetSplit train, val, test;
};

/// Fibonacci-lattice checkerboard: `num_centers` lattice points labelled by
/// position modulo `num_classes`; the test split is a denser lattice and
/// train/val are independent uniform draws, all labelled by the nearest
/// center under the haversine metric.
DatasetBundle build_checkerboard(int num_centers, int num_classes, int n_train,
                                 int n_val, int n_test, std::uint64_t seed);

/// Mean over lattice centers of the distance to the nearest other center,
/// in degrees. The x-axis of the resolution sweep.
double mean_center_spacing(int num_centers);

/// Random band-limited field bundle: each channel is a weighted sum of real
/// harmonics with degree < truth_degree, weights ~ N(0,1)/(1+l); targets are
/// standardized per channel with the train-split statistics.
struct SynthField {
  DatasetBundle bundle;
  Eigen::MatrixXd coefficients;  // channels x truth_degree^2
};
SynthField synth_field_bundle(int channels, int truth_degree, int n_train,
                              int n_val, int n_test, std::uint64_t seed);

/// CSV export `lon_deg,lat_deg,target...` (one target column per class label
/// or channel).
void write_split_csv(const DatasetSplit& split, TaskKind task, std::ostream& out);

/// Parses a split CSV back: points plus a target matrix with one column per
/// target field.
void read_split_csv(std::istream& in, PointSet& points, Eigen::MatrixXd& targets);

}  // namespace geoharm
