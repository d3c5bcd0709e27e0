#include "geoharm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "geoharm/csv.hpp"
#include "geoharm/rng.hpp"

namespace geoharm {

double wrap_longitude(double lon) {
  double w = lon - 2.0 * kPi * std::floor((lon + kPi) / (2.0 * kPi));
  // floor rounding can land exactly on pi; fold it back.
  if (w >= kPi) w -= 2.0 * kPi;
  return w;
}

SpherePoint make_point(double lon, double lat) {
  if (!std::isfinite(lon) || !std::isfinite(lat)) {
    throw std::invalid_argument("SpherePoint: non-finite coordinate");
  }
  if (lat < -kPi / 2 || lat > kPi / 2) {
    throw std::invalid_argument("SpherePoint: latitude outside [-pi/2, pi/2]: " +
                                std::to_string(lat));
  }
  return SpherePoint{wrap_longitude(lon), lat};
}

SpherePoint point_from_degrees(double lon_deg, double lat_deg) {
  return make_point(lon_deg * kRadPerDeg, lat_deg * kRadPerDeg);
}

namespace {

constexpr double kGoldenRatio = 1.6180339887498948482;

SpherePoint fibonacci_point(int i, int denominator_n) {
  const double lat = std::asin(2.0 * i / (2.0 * denominator_n + 1.0));
  const double lon = wrap_longitude(2.0 * kPi * i * kGoldenRatio);
  return SpherePoint{lon, lat};
}

}  // namespace

PointSet fibonacci_lattice(int n) {
  if (n < 1) throw std::invalid_argument("fibonacci_lattice: n must be >= 1");
  PointSet points;
  points.reserve(2 * static_cast<std::size_t>(n) + 1);
  for (int i = -n; i <= n; ++i) points.push_back(fibonacci_point(i, n));
  return points;
}

PointSet fibonacci_lattice_count(int count) {
  if (count < 1) throw std::invalid_argument("fibonacci_lattice_count: count must be >= 1");
  const int n = count / 2;
  const int hi = (count % 2 == 0) ? n - 1 : n;  // even counts drop index n
  PointSet points;
  points.reserve(static_cast<std::size_t>(count));
  for (int i = -n; i <= hi; ++i) points.push_back(fibonacci_point(i, n));
  return points;
}

PointSet uniform_sphere_sample(int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("uniform_sphere_sample: count must be >= 1");
  Rng rng(seed);
  PointSet points;
  points.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double lon = rng.uniform(-kPi, kPi);
    const double lat = std::asin(rng.uniform(-1.0, 1.0));
    points.push_back(SpherePoint{lon, lat});
  }
  return points;
}

double haversine(const SpherePoint& p, const SpherePoint& q) {
  const double sdlat = std::sin(0.5 * (q.lat - p.lat));
  const double sdlon = std::sin(0.5 * (q.lon - p.lon));
  const double h = sdlat * sdlat + std::cos(p.lat) * std::cos(q.lat) * sdlon * sdlon;
  return 2.0 * std::asin(std::sqrt(std::min(1.0, std::max(0.0, h))));
}

std::vector<int> nearest_center_labels(const PointSet& queries,
                                       const PointSet& centers,
                                       const std::vector<int>& center_labels) {
  if (centers.empty()) {
    throw std::invalid_argument("nearest_center_labels: empty centers");
  }
  if (centers.size() != center_labels.size()) {
    throw std::invalid_argument("nearest_center_labels: |centers| != |labels|");
  }
  std::vector<int> labels;
  labels.reserve(queries.size());
  for (const SpherePoint& q : queries) {
    double best = haversine(q, centers[0]);
    std::size_t best_idx = 0;
    for (std::size_t c = 1; c < centers.size(); ++c) {
      const double d = haversine(q, centers[c]);
      if (d < best) {
        best = d;
        best_idx = c;
      }
    }
    labels.push_back(center_labels[best_idx]);
  }
  return labels;
}

void write_points_csv(const PointSet& points, std::ostream& out) {
  out << "lon_deg,lat_deg\n";
  char buf[80];
  for (const SpherePoint& p : points) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", p.lon * kDegPerRad,
                  p.lat * kDegPerRad);
    out << buf;
  }
}

PointSet read_points_csv(std::istream& in) {
  CsvReader reader(in, {"lon_deg", "lat_deg"});
  PointSet points;
  std::vector<double> row;
  while (reader.next_row(row)) {
    points.push_back(point_from_degrees(row[0], row[1]));
  }
  return points;
}

}  // namespace geoharm
