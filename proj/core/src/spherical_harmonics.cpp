#include "geoharm/spherical_harmonics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "geoharm/legendre.hpp"

namespace geoharm {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

double horner(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

/// cos(m lon) and sin(m lon) for m = 0..count-1 by angle addition.
void trig_table(double lon, int count, std::vector<double>& cos_m,
                std::vector<double>& sin_m) {
  cos_m.resize(static_cast<std::size_t>(count));
  sin_m.resize(static_cast<std::size_t>(count));
  const double c = std::cos(lon), s = std::sin(lon);
  cos_m[0] = 1.0;
  sin_m[0] = 0.0;
  for (int m = 1; m < count; ++m) {
    cos_m[m] = cos_m[m - 1] * c - sin_m[m - 1] * s;
    sin_m[m] = sin_m[m - 1] * c + cos_m[m - 1] * s;
  }
}

}  // namespace

CompiledBasis compile_basis(int max_degree) {
  if (max_degree < 1 || max_degree > 50) {
    throw std::invalid_argument("compile_basis: max_degree must be in [1, 50]");
  }
  CompiledBasis basis;
  basis.max_degree_ = max_degree;
  basis.rows_.resize(static_cast<std::size_t>(max_degree));
  for (int l = 0; l < max_degree; ++l) {
    auto assoc = assoc_legendre_row(l);
    auto& row = basis.rows_[static_cast<std::size_t>(l)];
    row.resize(static_cast<std::size_t>(l) + 1);
    for (int m = 0; m <= l; ++m) {
      double scale = sh_normalization(l, m);
      if (m > 0) {
        scale *= kSqrt2;
        if (m % 2 != 0) scale = -scale;  // the (-1)^m in front of sqrt(2)
      }
      HarmonicEvaluator& ev = row[static_cast<std::size_t>(m)];
      ev.half_power = m;
      ev.coeffs = std::move(assoc[static_cast<std::size_t>(m)].poly.coeffs);
      for (double& c : ev.coeffs) c *= scale;
    }
  }
  return basis;
}

double real_sh(const CompiledBasis& basis, int l, int m, const SpherePoint& p) {
  const int m_abs = std::abs(m);
  if (l < 0 || l >= basis.max_degree() || m_abs > l) {
    throw std::invalid_argument("real_sh: (l, m) = (" + std::to_string(l) + ", " +
                                std::to_string(m) + ") outside basis");
  }
  const HarmonicEvaluator& ev = basis.evaluator(l, m_abs);
  const double x = std::sin(p.lat);
  double value = horner(ev.coeffs, x);
  if (ev.half_power > 0) {
    value *= std::pow((1.0 - x) * (1.0 + x), 0.5 * ev.half_power);
  }
  if (m > 0) value *= std::cos(m * p.lon);
  if (m < 0) value *= std::sin(m_abs * p.lon);
  return value;
}

std::vector<double> sh_embed(const CompiledBasis& basis, const SpherePoint& p) {
  const int L = basis.max_degree();
  std::vector<double> out(static_cast<std::size_t>(L) * static_cast<std::size_t>(L));

  const double x = std::sin(p.lat);
  const double t = (1.0 - x) * (1.0 + x);
  const double sroot = std::sqrt(std::max(0.0, t));  // = cos(lat)

  std::vector<double> cos_m, sin_m;
  trig_table(p.lon, L, cos_m, sin_m);

  for (int l = 0; l < L; ++l) {
    const std::size_t base = static_cast<std::size_t>(l) * static_cast<std::size_t>(l);
    double half_factor = 1.0;  // (1-x^2)^{m/2}
    for (int m = 0; m <= l; ++m) {
      const double plm = horner(basis.evaluator(l, m).coeffs, x) * half_factor;
      if (m == 0) {
        out[base + static_cast<std::size_t>(l)] = plm;
      } else {
        out[base + static_cast<std::size_t>(l + m)] = plm * cos_m[m];
        out[base + static_cast<std::size_t>(l - m)] = plm * sin_m[m];
      }
      half_factor *= sroot;
    }
  }
  return out;
}

std::vector<double> sh_embed_closed_form(int max_degree, const SpherePoint& p) {
  if (max_degree < 1) throw std::invalid_argument("sh_embed_closed_form: max_degree >= 1");
  const int L = max_degree;
  std::vector<double> out(static_cast<std::size_t>(L) * static_cast<std::size_t>(L));
  const double x = std::sin(p.lat);

  for (int l = 0; l < L; ++l) {
    const std::size_t base = static_cast<std::size_t>(l) * static_cast<std::size_t>(l);
    for (int m = 0; m <= l; ++m) {
      const double norm =
          std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * closed_form_norm_ratio(l, m));
      double value = norm * closed_form_eval(l, m, x);
      if (m == 0) {
        out[base + static_cast<std::size_t>(l)] = value;
      } else {
        value *= kSqrt2;
        if (m % 2 != 0) value = -value;
        out[base + static_cast<std::size_t>(l + m)] = value * std::cos(m * p.lon);
        out[base + static_cast<std::size_t>(l - m)] = value * std::sin(m * p.lon);
      }
    }
  }
  return out;
}

}  // namespace geoharm
