#include "geoharm/legendre.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "geoharm/geometry.hpp"

namespace geoharm {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

using RationalPoly = std::vector<Rational>;  // index k -> coefficient of x^k

BigInt binomial(int n, int k) {
  BigInt result = 1;
  for (int j = 0; j < k; ++j) {
    result *= n - j;
    result /= j + 1;
  }
  return result;
}

BigInt factorial(int n) {
  BigInt result = 1;
  for (int j = 2; j <= n; ++j) result *= j;
  return result;
}

RationalPoly differentiate(const RationalPoly& p) {
  if (p.size() <= 1) return {Rational(0)};
  RationalPoly d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = p[k] * static_cast<int>(k);
  return d;
}

void trim(RationalPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

/// Rodrigues: P_l = 1/(2^l l!) d^l/dx^l (x^2 - 1)^l, all arithmetic exact.
RationalPoly rational_legendre(int l) {
  if (l < 0) throw std::invalid_argument("legendre_poly: l must be >= 0");
  RationalPoly p(2 * static_cast<std::size_t>(l) + 1, Rational(0));
  for (int j = 0; j <= l; ++j) {
    BigInt c = binomial(l, j);
    if ((l - j) % 2 != 0) c = -c;
    p[2 * static_cast<std::size_t>(j)] = Rational(c);
  }
  for (int k = 0; k < l; ++k) p = differentiate(p);
  const Rational scale(BigInt(1), factorial(l) << l);
  for (Rational& c : p) c *= scale;
  trim(p);
  return p;
}

Polynomial to_double(const RationalPoly& p) {
  Polynomial out;
  out.coeffs.reserve(p.size());
  for (const Rational& c : p) out.coeffs.push_back(c.convert_to<double>());
  return out;
}

/// (-1)^m d^m/dx^m P_l as an exact polynomial; the (1-x^2)^{m/2} factor is
/// carried separately in AssocLegendre::half_power.
RationalPoly rational_assoc(int l, int m_nonneg) {
  RationalPoly p = rational_legendre(l);
  for (int k = 0; k < m_nonneg; ++k) p = differentiate(p);
  if (m_nonneg % 2 != 0) {
    for (Rational& c : p) c = -c;
  }
  trim(p);
  return p;
}

Rational negative_order_scale(int l, int m_abs) {
  // P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m
  Rational scale(factorial(l - m_abs), factorial(l + m_abs));
  if (m_abs % 2 != 0) scale = -scale;
  return scale;
}

}  // namespace

double AssocLegendre::eval(double x) const {
  if (std::abs(x) > 1.0) {
    throw std::invalid_argument("AssocLegendre::eval: |x| > 1");
  }
  double value = poly.eval(x);
  if (half_power > 0) {
    // (1-x)(1+x) keeps full precision near the endpoints.
    value *= std::pow((1.0 - x) * (1.0 + x), 0.5 * half_power);
  }
  return value;
}

Polynomial legendre_poly(int l) { return to_double(rational_legendre(l)); }

AssocLegendre assoc_legendre(int l, int m) {
  if (l < 0) throw std::invalid_argument("assoc_legendre: l must be >= 0");
  const int m_abs = std::abs(m);
  if (m_abs > l) throw std::invalid_argument("assoc_legendre: |m| > l");
  RationalPoly p = rational_assoc(l, m_abs);
  if (m < 0) {
    const Rational scale = negative_order_scale(l, m_abs);
    for (Rational& c : p) c *= scale;
  }
  return AssocLegendre{l, m, to_double(p), m_abs};
}

std::vector<AssocLegendre> assoc_legendre_row(int l) {
  if (l < 0) throw std::invalid_argument("assoc_legendre_row: l must be >= 0");
  std::vector<AssocLegendre> row;
  row.reserve(static_cast<std::size_t>(l) + 1);
  RationalPoly p = rational_legendre(l);
  for (int m = 0; m <= l; ++m) {
    RationalPoly signed_p = p;
    if (m % 2 != 0) {
      for (Rational& c : signed_p) c = -c;
    }
    trim(signed_p);
    row.push_back(AssocLegendre{l, m, to_double(signed_p), m});
    p = differentiate(p);
  }
  return row;
}

double legendre_eval_exact(int l, long long num, long long den) {
  if (den == 0) throw std::invalid_argument("legendre_eval_exact: zero denominator");
  const RationalPoly p = rational_legendre(l);
  const Rational x(num, den);
  Rational acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc.convert_to<double>();
}

double sh_normalization(int l, int m) {
  const int m_abs = std::abs(m);
  if (m_abs > l) throw std::invalid_argument("sh_normalization: |m| > l");
  const Rational ratio(factorial(l - m_abs), factorial(l + m_abs));
  return std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * ratio.convert_to<double>());
}

double normalized_eval(int l, int m, double x) {
  if (std::abs(x) > 1.0) throw std::invalid_argument("normalized_eval: |x| > 1");
  return sh_normalization(l, m) * assoc_legendre(l, std::abs(m)).eval(x);
}

double closed_form_eval(int l, int m, double x) {
  if (m < 0 || m > l) throw std::invalid_argument("closed_form_eval: need 0 <= m <= l");
  if (std::abs(x) > 1.0) throw std::invalid_argument("closed_form_eval: |x| > 1");

  double l_factorial = 1.0;
  for (int j = 2; j <= l; ++j) l_factorial *= j;

  double falling = 1.0;  // k!/(k-m)!
  for (int j = 2; j <= m; ++j) falling *= j;
  double lchoosek = 1.0;  // C(l, k)
  for (int j = 0; j < m; ++j) lchoosek = lchoosek * (l - j) / (j + 1);

  double xpow = 1.0;  // x^{k-m}
  double sum = 0.0;
  for (int k = m; k <= l; ++k) {
    // generalized binomial C((l+k-1)/2, l), the upper argument half-integer
    const double a = 0.5 * (l + k - 1);
    double gen = 1.0;
    for (int j = 0; j < l; ++j) gen *= a - j;
    gen /= l_factorial;

    sum += falling * xpow * lchoosek * gen;

    falling = falling * (k + 1) / (k + 1 - m);
    lchoosek = lchoosek * (l - k) / (k + 1);
    xpow *= x;
  }

  double result = std::ldexp(sum, l);  // * 2^l
  if (m % 2 != 0) result = -result;
  if (m > 0) result *= std::pow((1.0 - x) * (1.0 + x), 0.5 * m);
  return result;
}

double closed_form_norm_ratio(int l, int m) {
  double ratio = 1.0;
  for (int i = l - m + 1; i <= l + m; ++i) ratio /= i;
  return ratio;
}

void write_coefficient_csv(int max_degree, std::ostream& out) {
  out << "l,m,k,coeff\n";
  char buf[96];
  for (int l = 0; l < max_degree; ++l) {
    const auto row = assoc_legendre_row(l);
    for (int m = 0; m <= l; ++m) {
      const auto& coeffs = row[static_cast<std::size_t>(m)].poly.coeffs;
      for (std::size_t k = 0; k < coeffs.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%zu,%.17g\n", l, m, k, coeffs[k]);
        out << buf;
      }
    }
  }
}

}  // namespace geoharm
