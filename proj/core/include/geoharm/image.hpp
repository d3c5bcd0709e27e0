#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace geoharm {

/// Binary P5 grayscale image, maxval 255, rows top to bottom.
void write_pgm(const std::string& path, int width, int height,
               const std::vector<std::uint8_t>& gray);

/// Binary P6 RGB image.
void write_ppm(const std::string& path, int width, int height,
               const std::vector<std::uint8_t>& rgb);

/// Stable, well-separated color for a class index (HSV wheel).
std::array<std::uint8_t, 3> class_color(int label, int num_classes);

}  // namespace geoharm
