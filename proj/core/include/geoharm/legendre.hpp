#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace geoharm {

/// Dense polynomial in the monomial basis; coeffs[k] multiplies x^k.
struct Polynomial {
  std::vector<double> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  double eval(double x) const {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
  }
};

/// Associated Legendre function P_l^m(x) = poly(x) * (1-x^2)^(half_power/2),
/// Condon-Shortley phase folded into the polynomial coefficients.
/// half_power == |m|; defined for x in [-1, 1].
struct AssocLegendre {
  int l = 0;
  int m = 0;
  Polynomial poly;
  int half_power = 0;

  double eval(double x) const;
};

/// Zero-order Legendre polynomial P_l built by Rodrigues' formula with exact
/// rational coefficient arithmetic; coefficients converted to double once at
/// the end.
Polynomial legendre_poly(int l);

/// P_l^m for any |m| <= l. Positive orders differentiate P_l m times with the
/// (-1)^m phase; negative orders apply P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m.
AssocLegendre assoc_legendre(int l, int m);

/// All of P_l^0 .. P_l^l in one differentiation sweep.
std::vector<AssocLegendre> assoc_legendre_row(int l);

/// Exact evaluation of P_l at the rational point num/den (used to check the
/// endpoint identities without float round-off in the coefficients).
double legendre_eval_exact(int l, long long num, long long den);

/// sqrt((2l+1)/(4 pi) * (l-|m|)!/(l+|m|)!), the spherical-harmonic
/// normalization of P_l^m.
double sh_normalization(int l, int m);

/// P-bar_l^{|m|}(x): normalized associated Legendre value.
double normalized_eval(int l, int m, double x);

/// Green's iterative closed form for P_l^m (0 <= m <= l), recomputing
/// factorials and binomials on every call. Kept as the slow reference path
/// for the runtime comparison; numerically it matches assoc_legendre.
double closed_form_eval(int l, int m, double x);

/// (l-m)!/(l+m)! computed iteratively in double, for the closed-form path.
double closed_form_norm_ratio(int l, int m);

/// Debug dump of the polynomial parts of P_l^m for l < max_degree,
/// 0 <= m <= l, as CSV rows `l,m,k,coeff`.
void write_coefficient_csv(int max_degree, std::ostream& out);

}  // namespace geoharm
