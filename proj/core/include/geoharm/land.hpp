#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "geoharm/dataset.hpp"
#include "geoharm/geometry.hpp"

namespace geoharm {

/// Closed rings in radians (first point == last point). Holes are ordinary
/// rings; containment is resolved by the even-odd rule.
struct PolygonSet {
  std::vector<std::vector<SpherePoint>> rings;
};

/// Loads the plain-JSON polygon format: {"rings": [[[lon_deg, lat_deg], ...],
/// ...]}. Every ring needs >= 4 vertices with first == last; see
/// docs/formats.md.
PolygonSet load_polygons(const std::string& path);
PolygonSet parse_polygons(std::istream& in);

/// Even-odd ray casting in lon/lat space. Edges spanning more than half the
/// globe in longitude are taken the short way around and split at the
/// antimeridian.
bool point_in_land(const SpherePoint& p, const PolygonSet& polygons);

/// Binary land/water bundle: train and an independent 5000-point validation
/// draw are uniform samples, the test split is a Fibonacci lattice.
DatasetBundle build_landocean(const PolygonSet& polygons, int n_train, int n_test,
                              std::uint64_t seed);

}  // namespace geoharm
