#include "geoharm/land.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "geoharm/errors.hpp"
#include "geoharm/rng.hpp"

namespace geoharm {

PolygonSet parse_polygons(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("polygon json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rings") || !doc["rings"].is_array()) {
    throw parse_error("polygon json: expected object with a 'rings' array");
  }

  PolygonSet set;
  std::size_t index = 0;
  for (const auto& ring_json : doc["rings"]) {
    const std::string where = "ring " + std::to_string(index);
    if (!ring_json.is_array() || ring_json.size() < 4) {
      throw parse_error("polygon json: " + where + " needs >= 4 vertices");
    }
    std::vector<SpherePoint> ring;
    ring.reserve(ring_json.size());
    for (const auto& vertex : ring_json) {
      if (!vertex.is_array() || vertex.size() != 2 || !vertex[0].is_number() ||
          !vertex[1].is_number()) {
        throw parse_error("polygon json: " + where + " has a malformed vertex");
      }
      const double lon_deg = vertex[0].get<double>();
      const double lat_deg = vertex[1].get<double>();
      if (lon_deg < -180.0 || lon_deg > 180.0 || lat_deg < -90.0 || lat_deg > 90.0) {
        throw parse_error("polygon json: " + where + " vertex out of range");
      }
      // Keep raw radian coordinates (no wrap) so +-180 edges stay intact.
      ring.push_back(SpherePoint{lon_deg * kRadPerDeg, lat_deg * kRadPerDeg});
    }
    const auto& first = ring_json.front();
    const auto& last = ring_json.back();
    if (first[0].get<double>() != last[0].get<double>() ||
        first[1].get<double>() != last[1].get<double>()) {
      throw parse_error("polygon json: " + where + " is not closed");
    }
    set.rings.push_back(std::move(ring));
    ++index;
  }
  return set;
}

PolygonSet load_polygons(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open polygon file: " + path);
  return parse_polygons(in);
}

namespace {

/// Counts crossings of the eastward ray from p with the segment a-b, both
/// already inside the [-pi, pi] strip.
bool ray_crosses(const SpherePoint& p, double alon, double alat, double blon,
                 double blat) {
  if ((alat > p.lat) == (blat > p.lat)) return false;
  const double t = (p.lat - alat) / (blat - alat);
  const double lon_cross = alon + t * (blon - alon);
  return lon_cross > p.lon;
}

}  // namespace

bool point_in_land(const SpherePoint& p, const PolygonSet& polygons) {
  bool inside = false;
  for (const auto& ring : polygons.rings) {
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
      double alon = ring[i].lon, alat = ring[i].lat;
      double blon = ring[i + 1].lon, blat = ring[i + 1].lat;
      double dlon = blon - alon;
      if (std::abs(dlon) <= kPi) {
        if (ray_crosses(p, alon, alat, blon, blat)) inside = !inside;
        continue;
      }
      // The edge takes the short way across the antimeridian: unwrap the
      // endpoint, split at +-pi, and test both halves inside the strip.
      const double shift = dlon > 0.0 ? -2.0 * kPi : 2.0 * kPi;
      const double blon_adj = blon + shift;
      const double boundary = dlon > 0.0 ? -kPi : kPi;
      const double t = (boundary - alon) / (blon_adj - alon);
      const double lat_cross = alat + t * (blat - alat);
      if (ray_crosses(p, alon, alat, boundary, lat_cross)) inside = !inside;
      if (ray_crosses(p, -boundary, lat_cross, blon, blat)) inside = !inside;
    }
  }
  return inside;
}

DatasetBundle build_landocean(const PolygonSet& polygons, int n_train, int n_test,
                              std::uint64_t seed) {
  if (polygons.rings.empty() && n_train < 1) {
    throw std::invalid_argument("build_landocean: invalid inputs");
  }
  if (n_train < 1 || n_test < 1) {
    throw std::invalid_argument("build_landocean: split sizes must be positive");
  }
  DatasetBundle bundle;
  bundle.task = TaskKind::Binary;
  bundle.arity = 1;
  bundle.train.points = uniform_sphere_sample(n_train, mix_seed(seed, 21));
  bundle.val.points = uniform_sphere_sample(5000, mix_seed(seed, 22));
  bundle.test.points = fibonacci_lattice_count(n_test);
  for (DatasetSplit* split : {&bundle.train, &bundle.val, &bundle.test}) {
    split->labels.reserve(split->points.size());
    for (const SpherePoint& p : split->points) {
      split->labels.push_back(point_in_land(p, polygons) ? 1 : 0);
    }
  }
  return bundle;
}

}  // namespace geoharm
