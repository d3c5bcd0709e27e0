#include "geoharm/image.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace geoharm {

namespace {

void write_pnm(const std::string& path, const char* magic, int width, int height,
               const std::vector<std::uint8_t>& data, std::size_t bytes_per_pixel) {
  if (width < 1 || height < 1) throw std::invalid_argument("image: empty image");
  const std::size_t expected = static_cast<std::size_t>(width) *
                               static_cast<std::size_t>(height) * bytes_per_pixel;
  if (data.size() != expected) throw std::invalid_argument("image: size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image: " + path);
  out << magic << "\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("image write failed: " + path);
}

}  // namespace

void write_pgm(const std::string& path, int width, int height,
               const std::vector<std::uint8_t>& gray) {
  write_pnm(path, "P5", width, height, gray, 1);
}

void write_ppm(const std::string& path, int width, int height,
               const std::vector<std::uint8_t>& rgb) {
  write_pnm(path, "P6", width, height, rgb, 3);
}

std::array<std::uint8_t, 3> class_color(int label, int num_classes) {
  if (num_classes < 1) num_classes = 1;
  const double h = 6.0 * (label % num_classes) / num_classes;
  const int sector = static_cast<int>(h);
  const double f = h - sector;
  const double v = 0.95, s = 0.85;
  const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
  double r = 0, g = 0, b = 0;
  switch (sector % 6) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    case 5: r = v; g = p; b = q; break;
  }
  auto to8 = [](double x) { return static_cast<std::uint8_t>(std::lround(255.0 * x)); };
  return {to8(r), to8(g), to8(b)};
}

}  // namespace geoharm
