#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "geoharm/geometry.hpp"
#include "geoharm/spherical_harmonics.hpp"

namespace geoharm {

enum class EmbeddingKind {
  Direct,
  Cartesian3D,
  Wrap,
  Grid,
  Theory,
  SphereC,
  SphereCPlus,
  SphereM,
  SphereMPlus,
  SH,
};

/// Positional-embedding descriptor. The multi-scale kinds read S and the
/// radii (declared in degrees); SH reads only L.
struct EmbeddingSpec {
  EmbeddingKind kind = EmbeddingKind::Direct;
  int scales = 32;         // S
  double r_min_deg = 1.0;  // finest resolvable radius
  double r_max_deg = 360.0;
  int sh_degree = 20;  // L

  void validate() const;
};

/// Parses `kind[:k=v,...]`, e.g. `grid:S=16,rmin=8,rmax=360` or `sh:L=20`.
/// Unknown kinds, unknown keys, and keys that do not apply to the kind are
/// errors.
EmbeddingSpec parse_embedding_spec(const std::string& text);
std::string to_string(const EmbeddingSpec& spec);

/// alpha_s = r_min * (r_max/r_min)^(s/(S-1)) in degrees; S == 1 gives r_min.
double scale_factor(int s, const EmbeddingSpec& spec);

/// Output dimension of embed() for this spec.
int embed_dim(const EmbeddingSpec& spec);

/// Evaluates a spec repeatedly; compiles the spherical-harmonic tables once.
class Embedder {
 public:
  explicit Embedder(EmbeddingSpec spec);

  const EmbeddingSpec& spec() const { return spec_; }
  int dim() const { return dim_; }

  void embed_into(const SpherePoint& p, double* out) const;
  std::vector<double> embed(const SpherePoint& p) const;

  /// One row per point.
  Eigen::MatrixXd embed_matrix(const PointSet& points) const;

 private:
  EmbeddingSpec spec_;
  int dim_;
  std::vector<double> inv_alpha_rad_;  // 1 / (alpha_s in radians)
  std::optional<CompiledBasis> basis_;
};

/// Single-shot convenience form; for SH this compiles the basis on the fly.
std::vector<double> embed(const EmbeddingSpec& spec, const SpherePoint& p);

}  // namespace geoharm
