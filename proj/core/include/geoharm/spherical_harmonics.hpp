#pragma once

#include <vector>

#include "geoharm/geometry.hpp"

namespace geoharm {

/// One compiled real spherical harmonic: Horner coefficients of the
/// polynomial part in sin(lat), with normalization, the sqrt(2) factor and
/// all sign phases folded in, plus the (1-x^2)^(half_power/2) exponent.
struct HarmonicEvaluator {
  std::vector<double> coeffs;
  int half_power = 0;
};

/// Precompiled evaluators for all (l, m) with l < max_degree, |m| <= l.
/// The logical table has max_degree^2 entries; +m and -m share one
/// polynomial and differ only in the longitude factor (cos vs sin).
class CompiledBasis {
 public:
  int max_degree() const { return max_degree_; }
  std::size_t size() const {
    return static_cast<std::size_t>(max_degree_) * static_cast<std::size_t>(max_degree_);
  }

  const HarmonicEvaluator& evaluator(int l, int m_abs) const {
    return rows_[static_cast<std::size_t>(l)][static_cast<std::size_t>(m_abs)];
  }

  friend CompiledBasis compile_basis(int max_degree);

 private:
  int max_degree_ = 0;
  std::vector<std::vector<HarmonicEvaluator>> rows_;
};

/// Builds all evaluators up to degree max_degree-1 from the exact Legendre
/// construction. 1 <= max_degree <= 50.
CompiledBasis compile_basis(int max_degree);

/// Y_{l,m}(p): the real spherical harmonic. P-bar is applied to
/// cos(colatitude) = sin(lat); the longitude enters as cos(m lon) for m > 0
/// and sin(|m| lon) for m < 0.
double real_sh(const CompiledBasis& basis, int l, int m, const SpherePoint& p);

/// All max_degree^2 harmonics at p, ordered l-major with m ascending -l..l.
std::vector<double> sh_embed(const CompiledBasis& basis, const SpherePoint& p);

/// Same embedding through Green's closed form, recomputing every polynomial
/// value per call. Reference path for the runtime comparison only.
std::vector<double> sh_embed_closed_form(int max_degree, const SpherePoint& p);

}  // namespace geoharm
