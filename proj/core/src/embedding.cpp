#include "geoharm/embedding.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "geoharm/errors.hpp"

namespace geoharm {

namespace {

constexpr double kSqrt3Half = 0.86602540378443864676;

bool is_multiscale(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::Grid:
    case EmbeddingKind::Theory:
    case EmbeddingKind::SphereC:
    case EmbeddingKind::SphereCPlus:
    case EmbeddingKind::SphereM:
    case EmbeddingKind::SphereMPlus:
      return true;
    default:
      return false;
  }
}

EmbeddingKind kind_from_name(const std::string& name) {
  if (name == "direct") return EmbeddingKind::Direct;
  if (name == "cartesian3d") return EmbeddingKind::Cartesian3D;
  if (name == "wrap") return EmbeddingKind::Wrap;
  if (name == "grid") return EmbeddingKind::Grid;
  if (name == "theory") return EmbeddingKind::Theory;
  if (name == "spherec") return EmbeddingKind::SphereC;
  if (name == "spherec+" || name == "spherecplus") return EmbeddingKind::SphereCPlus;
  if (name == "spherem") return EmbeddingKind::SphereM;
  if (name == "spherem+" || name == "spheremplus") return EmbeddingKind::SphereMPlus;
  if (name == "sh") return EmbeddingKind::SH;
  throw parse_error("unknown embedding kind '" + name + "'");
}

const char* kind_name(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::Direct: return "direct";
    case EmbeddingKind::Cartesian3D: return "cartesian3d";
    case EmbeddingKind::Wrap: return "wrap";
    case EmbeddingKind::Grid: return "grid";
    case EmbeddingKind::Theory: return "theory";
    case EmbeddingKind::SphereC: return "spherec";
    case EmbeddingKind::SphereCPlus: return "spherec+";
    case EmbeddingKind::SphereM: return "spherem";
    case EmbeddingKind::SphereMPlus: return "spherem+";
    case EmbeddingKind::SH: return "sh";
  }
  return "?";
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw parse_error("expected key=value, got '" + item + "'");
    }
    kv[item.substr(0, eq)] = item.substr(eq + 1);
    pos = comma + 1;
  }
  return kv;
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw parse_error("key '" + key + "': integer expected, got '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw parse_error("key '" + key + "': number expected, got '" + value + "'");
  }
}

}  // namespace

void EmbeddingSpec::validate() const {
  if (is_multiscale(kind)) {
    if (scales < 1) throw std::invalid_argument("embedding: S must be >= 1");
    if (!(r_min_deg > 0.0) || r_min_deg > r_max_deg) {
      throw std::invalid_argument("embedding: need 0 < r_min <= r_max");
    }
  }
  if (kind == EmbeddingKind::SH && sh_degree < 1) {
    throw std::invalid_argument("embedding: L must be >= 1");
  }
}

EmbeddingSpec parse_embedding_spec(const std::string& text) {
  const std::size_t colon = text.find(':');
  EmbeddingSpec spec;
  spec.kind = kind_from_name(text.substr(0, colon));
  if (colon != std::string::npos) {
    for (const auto& [key, value] : parse_kv(text.substr(colon + 1))) {
      if (key == "S" && is_multiscale(spec.kind)) {
        spec.scales = parse_int(key, value);
      } else if (key == "rmin" && is_multiscale(spec.kind)) {
        spec.r_min_deg = parse_double(key, value);
      } else if (key == "rmax" && is_multiscale(spec.kind)) {
        spec.r_max_deg = parse_double(key, value);
      } else if (key == "L" && spec.kind == EmbeddingKind::SH) {
        spec.sh_degree = parse_int(key, value);
      } else {
        throw parse_error("embedding '" + std::string(kind_name(spec.kind)) +
                          "': unknown key '" + key + "'");
      }
    }
  }
  spec.validate();
  return spec;
}

std::string to_string(const EmbeddingSpec& spec) {
  char buf[128];
  if (is_multiscale(spec.kind)) {
    std::snprintf(buf, sizeof(buf), "%s:S=%d,rmin=%g,rmax=%g", kind_name(spec.kind),
                  spec.scales, spec.r_min_deg, spec.r_max_deg);
  } else if (spec.kind == EmbeddingKind::SH) {
    std::snprintf(buf, sizeof(buf), "sh:L=%d", spec.sh_degree);
  } else {
    std::snprintf(buf, sizeof(buf), "%s", kind_name(spec.kind));
  }
  return buf;
}

double scale_factor(int s, const EmbeddingSpec& spec) {
  if (spec.scales < 1) throw std::invalid_argument("scale_factor: S must be >= 1");
  if (s < 0 || s >= spec.scales) {
    throw std::invalid_argument("scale_factor: s outside [0, S)");
  }
  if (spec.scales == 1) return spec.r_min_deg;
  const double t = static_cast<double>(s) / (spec.scales - 1);
  return spec.r_min_deg * std::pow(spec.r_max_deg / spec.r_min_deg, t);
}

int embed_dim(const EmbeddingSpec& spec) {
  switch (spec.kind) {
    case EmbeddingKind::Direct: return 2;
    case EmbeddingKind::Cartesian3D: return 3;
    case EmbeddingKind::Wrap: return 4;
    case EmbeddingKind::Grid: return 4 * spec.scales;
    case EmbeddingKind::Theory: return 6 * spec.scales;
    case EmbeddingKind::SphereC: return 3 * spec.scales;
    case EmbeddingKind::SphereCPlus: return 7 * spec.scales;
    case EmbeddingKind::SphereM: return 5 * spec.scales;
    case EmbeddingKind::SphereMPlus: return 9 * spec.scales;
    case EmbeddingKind::SH: return spec.sh_degree * spec.sh_degree;
  }
  throw std::invalid_argument("embed_dim: bad kind");
}

Embedder::Embedder(EmbeddingSpec spec) : spec_(spec) {
  spec_.validate();
  dim_ = embed_dim(spec_);
  if (is_multiscale(spec_.kind)) {
    inv_alpha_rad_.reserve(static_cast<std::size_t>(spec_.scales));
    for (int s = 0; s < spec_.scales; ++s) {
      // Radii are declared in degrees; the divisor applied to radian
      // coordinates is the radius converted to radians.
      inv_alpha_rad_.push_back(1.0 / (scale_factor(s, spec_) * kRadPerDeg));
    }
  }
  if (spec_.kind == EmbeddingKind::SH) {
    basis_ = compile_basis(spec_.sh_degree);
  }
}

void Embedder::embed_into(const SpherePoint& p, double* out) const {
  const double lon = p.lon, lat = p.lat;
  switch (spec_.kind) {
    case EmbeddingKind::Direct:
      out[0] = lon;
      out[1] = lat;
      return;
    case EmbeddingKind::Cartesian3D:
      out[0] = std::cos(lat) * std::cos(lon);
      out[1] = std::cos(lat) * std::sin(lon);
      out[2] = std::sin(lat);
      return;
    case EmbeddingKind::Wrap:
      out[0] = std::cos(lon);
      out[1] = std::sin(lon);
      out[2] = std::cos(lat);
      out[3] = std::sin(lat);
      return;
    case EmbeddingKind::Grid: {
      for (int s = 0; s < spec_.scales; ++s) {
        const double a = lon * inv_alpha_rad_[s];
        const double b = lat * inv_alpha_rad_[s];
        out[4 * s + 0] = std::cos(a);
        out[4 * s + 1] = std::sin(a);
        out[4 * s + 2] = std::cos(b);
        out[4 * s + 3] = std::sin(b);
      }
      return;
    }
    case EmbeddingKind::Theory: {
      // Three 120-degree-spaced directions applied to [lon, lat].
      const double dots[3] = {lon, -0.5 * lon + kSqrt3Half * lat,
                              -0.5 * lon - kSqrt3Half * lat};
      for (int s = 0; s < spec_.scales; ++s) {
        for (int i = 0; i < 3; ++i) {
          const double a = dots[i] * inv_alpha_rad_[s];
          out[6 * s + 2 * i + 0] = std::cos(a);
          out[6 * s + 2 * i + 1] = std::sin(a);
        }
      }
      return;
    }
    case EmbeddingKind::SphereC: {
      for (int s = 0; s < spec_.scales; ++s) {
        const double a = lon * inv_alpha_rad_[s];
        const double b = lat * inv_alpha_rad_[s];
        out[3 * s + 0] = std::sin(b);
        out[3 * s + 1] = std::cos(b) * std::cos(a);
        out[3 * s + 2] = std::cos(b) * std::sin(a);
      }
      return;
    }
    case EmbeddingKind::SphereCPlus: {
      // SphereC block for every scale, then the Grid block.
      for (int s = 0; s < spec_.scales; ++s) {
        const double a = lon * inv_alpha_rad_[s];
        const double b = lat * inv_alpha_rad_[s];
        out[3 * s + 0] = std::sin(b);
        out[3 * s + 1] = std::cos(b) * std::cos(a);
        out[3 * s + 2] = std::cos(b) * std::sin(a);
      }
      double* grid = out + 3 * spec_.scales;
      for (int s = 0; s < spec_.scales; ++s) {
        const double a = lon * inv_alpha_rad_[s];
        const double b = lat * inv_alpha_rad_[s];
        grid[4 * s + 0] = std::cos(a);
        grid[4 * s + 1] = std::sin(a);
        grid[4 * s + 2] = std::cos(b);
        grid[4 * s + 3] = std::sin(b);
      }
      return;
    }
    case EmbeddingKind::SphereM: {
      const double cos_lon = std::cos(lon), sin_lon = std::sin(lon);
      const double cos_lat = std::cos(lat);
      for (int s = 0; s < spec_.scales; ++s) {
        const double a = lon * inv_alpha_rad_[s];
        const double b = lat * inv_alpha_rad_[s];
        out[5 * s + 0] = std::sin(b);
        out[5 * s + 1] = std::cos(b) * cos_lon;
        out[5 * s + 2] = cos_lat * std::cos(a);
        out[5 * s + 3] = std::cos(b) * sin_lon;
        out[5 * s + 4] = cos_lat * std::sin(a);
      }
      return;
    }
    case EmbeddingKind::SphereMPlus: {
      const double cos_lon = std::cos(lon), sin_lon = std::sin(lon);
      const double cos_lat = std::cos(lat);
      for (int s = 0; s < spec_.scales; ++s) {
        const double a = lon * inv_alpha_rad_[s];
        const double b = lat * inv_alpha_rad_[s];
        out[5 * s + 0] = std::sin(b);
        out[5 * s + 1] = std::cos(b) * cos_lon;
        out[5 * s + 2] = cos_lat * std::cos(a);
        out[5 * s + 3] = std::cos(b) * sin_lon;
        out[5 * s + 4] = cos_lat * std::sin(a);
      }
      double* grid = out + 5 * spec_.scales;
      for (int s = 0; s < spec_.scales; ++s) {
        const double a = lon * inv_alpha_rad_[s];
        const double b = lat * inv_alpha_rad_[s];
        grid[4 * s + 0] = std::cos(a);
        grid[4 * s + 1] = std::sin(a);
        grid[4 * s + 2] = std::cos(b);
        grid[4 * s + 3] = std::sin(b);
      }
      return;
    }
    case EmbeddingKind::SH: {
      const std::vector<double> v = sh_embed(*basis_, p);
      std::copy(v.begin(), v.end(), out);
      return;
    }
  }
  throw std::invalid_argument("embed: bad kind");
}

std::vector<double> Embedder::embed(const SpherePoint& p) const {
  std::vector<double> out(static_cast<std::size_t>(dim_));
  embed_into(p, out.data());
  return out;
}

Eigen::MatrixXd Embedder::embed_matrix(const PointSet& points) const {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(points.size()), dim_);
  std::vector<double> row(static_cast<std::size_t>(dim_));
  for (std::size_t i = 0; i < points.size(); ++i) {
    embed_into(points[i], row.data());
    for (int j = 0; j < dim_; ++j) m(static_cast<Eigen::Index>(i), j) = row[j];
  }
  return m;
}

std::vector<double> embed(const EmbeddingSpec& spec, const SpherePoint& p) {
  return Embedder(spec).embed(p);
}

}  // namespace geoharm
