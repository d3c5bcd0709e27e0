#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace geoharm {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegPerRad = 180.0 / kPi;
inline constexpr double kRadPerDeg = kPi / 180.0;

/// A point on the unit sphere: longitude in [-pi, pi], latitude in
/// [-pi/2, pi/2], both radians.
struct SpherePoint {
  double lon = 0.0;
  double lat = 0.0;
};

using PointSet = std::vector<SpherePoint>;

/// Wraps an angle into [-pi, pi); adding any multiple of 2*pi yields the
/// same result.
double wrap_longitude(double lon);

/// Validates latitude and wraps longitude. Throws std::invalid_argument on
/// non-finite input or latitude outside [-pi/2, pi/2].
SpherePoint make_point(double lon, double lat);

SpherePoint point_from_degrees(double lon_deg, double lat_deg);

/// Fibonacci lattice over index i in [-n, n]: lat_i = asin(2i/(2n+1)),
/// lon_i = wrap(2*pi*i*golden_ratio). 2n+1 points ordered by i.
PointSet fibonacci_lattice(int n);

/// Fibonacci lattice with exactly `count` points. Odd counts use the
/// symmetric index range [-n, n]; even counts use the half-open range
/// [-n, n) with the same 2n+1 denominator, dropping the northernmost index.
PointSet fibonacci_lattice_count(int count);

/// `count` i.i.d. points, uniform w.r.t. surface area: lon ~ U(-pi, pi),
/// lat = asin(U(-1, 1)). Deterministic given seed.
PointSet uniform_sphere_sample(int count, std::uint64_t seed);

/// Great-circle central angle between p and q, in [0, pi] radians.
double haversine(const SpherePoint& p, const SpherePoint& q);

/// Labels every query with the label of its haversine-nearest center.
/// Ties go to the lowest center index.
std::vector<int> nearest_center_labels(const PointSet& queries,
                                       const PointSet& centers,
                                       const std::vector<int>& center_labels);

/// CSV with header `lon_deg,lat_deg`, 9 significant digits, degrees.
void write_points_csv(const PointSet& points, std::ostream& out);
PointSet read_points_csv(std::istream& in);

}  // namespace geoharm
