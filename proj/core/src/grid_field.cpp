#include "geoharm/grid_field.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "geoharm/binary_io.hpp"
#include "geoharm/errors.hpp"
#include "geoharm/rng.hpp"

namespace geoharm {

SpherePoint GridField::cell_center(int row, int col) const {
  return point_from_degrees(lon0_deg + col * dlon_deg, lat0_deg + row * dlat_deg);
}

void GridField::validate() const {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid field: empty grid");
  if (channel_names.empty()) throw std::invalid_argument("grid field: no channels");
  if (!(dlon_deg > 0.0) || !(dlat_deg > 0.0)) {
    throw std::invalid_argument("grid field: spacing must be positive");
  }
  const std::size_t expected = static_cast<std::size_t>(channels()) *
                               static_cast<std::size_t>(rows) *
                               static_cast<std::size_t>(cols);
  if (values.size() != expected) {
    throw std::invalid_argument("grid field: value count does not match dims");
  }
}

void save_grid_field(const GridField& field, const std::string& path) {
  field.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write grid field: " + path);
  out.write("GRDF1", 5);
  io::write_le<std::uint32_t>(out, 1);
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.channels()));
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.rows));
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.cols));
  io::write_f64(out, field.lon0_deg);
  io::write_f64(out, field.dlon_deg);
  io::write_f64(out, field.lat0_deg);
  io::write_f64(out, field.dlat_deg);
  for (const std::string& name : field.channel_names) io::write_string(out, name);
  for (double v : field.values) io::write_f64(out, v);
  if (!out) throw std::runtime_error("grid field write failed: " + path);
}

GridField load_grid_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open grid field: " + path);
  char magic[5];
  io::read_bytes(in, magic, 5);
  if (std::string(magic, 5) != "GRDF1") throw parse_error("not a GRDF1 file: " + path);
  if (io::read_le<std::uint32_t>(in) != 1) throw parse_error("unsupported GRDF1 version");

  GridField field;
  const auto channels = io::read_le<std::uint32_t>(in);
  field.rows = static_cast<int>(io::read_le<std::uint32_t>(in));
  field.cols = static_cast<int>(io::read_le<std::uint32_t>(in));
  field.lon0_deg = io::read_f64(in);
  field.dlon_deg = io::read_f64(in);
  field.lat0_deg = io::read_f64(in);
  field.dlat_deg = io::read_f64(in);
  if (channels == 0 || channels > 4096) throw parse_error("GRDF1: bad channel count");
  field.channel_names.reserve(channels);
  for (std::uint32_t c = 0; c < channels; ++c) {
    field.channel_names.push_back(io::read_string(in));
  }
  const std::size_t count = static_cast<std::size_t>(channels) *
                            static_cast<std::size_t>(field.rows) *
                            static_cast<std::size_t>(field.cols);
  field.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) field.values[i] = io::read_f64(in);
  try {
    field.validate();
  } catch (const std::exception& e) {
    throw parse_error(std::string("GRDF1: ") + e.what());
  }
  return field;
}

DatasetBundle grid_to_bundle(const GridField& field, double train_frac,
                             double val_frac, std::uint64_t seed) {
  field.validate();
  if (!(train_frac > 0.0) || !(val_frac > 0.0) || train_frac >= 1.0 ||
      val_frac >= 1.0 || train_frac + val_frac >= 1.0) {
    throw std::invalid_argument(
        "grid_to_bundle: fractions must lie in (0,1) and sum below 1");
  }
  const std::size_t n = static_cast<std::size_t>(field.rows) *
                        static_cast<std::size_t>(field.cols);
  const std::size_t n_train = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * train_frac));
  const std::size_t n_val = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * val_frac));
  if (n_train < 1) {
    throw std::invalid_argument("grid_to_bundle: train fraction selects no cells");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(mix_seed(seed, 0x6e1d));
  rng.shuffle(order);

  DatasetBundle bundle;
  bundle.task = TaskKind::Regression;
  bundle.arity = field.channels();

  auto fill = [&](DatasetSplit& split, std::size_t begin, std::size_t end) {
    const std::size_t count = end - begin;
    split.points.reserve(count);
    split.values.resize(static_cast<Eigen::Index>(count), field.channels());
    for (std::size_t i = begin; i < end; ++i) {
      const int row = static_cast<int>(order[i] / field.cols);
      const int col = static_cast<int>(order[i] % field.cols);
      split.points.push_back(field.cell_center(row, col));
      for (int c = 0; c < field.channels(); ++c) {
        split.values(static_cast<Eigen::Index>(i - begin), c) = field.at(c, row, col);
      }
    }
  };
  fill(bundle.train, 0, n_train);
  fill(bundle.val, n_train, n_train + n_val);
  fill(bundle.test, n_train + n_val, n);
  return bundle;
}

}  // namespace geoharm
