#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geoharm/dataset.hpp"

namespace geoharm {

/// Regularly gridded multi-channel field (GRDF1 container). Axis descriptors
/// give the center of cell (0, 0) and the positive spacing; cell (r, c) is
/// centered at (lon0 + c*dlon, lat0 + r*dlat) degrees.
struct GridField {
  int rows = 0;  // latitude count
  int cols = 0;  // longitude count
  double lon0_deg = 0.0;
  double dlon_deg = 1.0;
  double lat0_deg = 0.0;
  double dlat_deg = 1.0;
  std::vector<std::string> channel_names;
  std::vector<double> values;  // channel-major, then row-major

  int channels() const { return static_cast<int>(channel_names.size()); }

  double& at(int channel, int row, int col) {
    return values[(static_cast<std::size_t>(channel) * rows + row) * cols + col];
  }
  double at(int channel, int row, int col) const {
    return values[(static_cast<std::size_t>(channel) * rows + row) * cols + col];
  }

  SpherePoint cell_center(int row, int col) const;

  void validate() const;
};

/// Binary GRDF1 files; layout documented bit-exactly in docs/formats.md.
void save_grid_field(const GridField& field, const std::string& path);
GridField load_grid_field(const std::string& path);

/// Flattens cells to (center point, channel vector) pairs and splits them by
/// shuffled cell index: floor(n*train_frac) train cells, floor(n*val_frac)
/// validation cells, remainder test.
DatasetBundle grid_to_bundle(const GridField& field, double train_frac,
                             double val_frac, std::uint64_t seed);

}  // namespace geoharm
