#ifndef GRASSINV_SPECFUN_HPP
#define GRASSINV_SPECFUN_HPP

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "grassinv/errors.hpp"

namespace grassinv {

inline double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0, got " + std::to_string(x));
  return std::lgamma(x);
}

/// ln Γ_m(a) = m(m−1)/4 · ln π + Σ_{j<m} ln Γ(a − j/2)
inline double log_siegel_gamma(int m, double a) {
  if (m < 1) throw DomainError("siegel_gamma requires m >= 1");
  double s = 0.25 * m * (m - 1) * std::log(std::numbers::pi);
  for (int j = 0; j < m; ++j) {
    const double arg = a - 0.5 * j;
    if (!(arg > 0.0)) throw DomainError("siegel_gamma argument a - j/2 must be positive");
    s += std::lgamma(arg);
  }
  return s;
}

/// Multivariate (Siegel) gamma function Γ_m(a).
inline double siegel_gamma(int m, double a) { return std::exp(log_siegel_gamma(m, a)); }

/// Surface area σ_{n−1} of the unit sphere S^{n−1} ⊂ ℝⁿ.
inline double sphere_area(int n) {
  if (n < 1) throw DomainError("sphere_area requires n >= 1");
  return 2.0 * std::exp(0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n));
}

/// Total mass σ_{n,m} = 2^m π^{nm/2} / Γ_m(n/2) of the invariant measure on V_{n,m}.
inline double stiefel_volume(int n, int m) {
  if (m < 1 || m > n) throw DomainError("stiefel_volume requires 1 <= m <= n");
  return std::exp(m * std::log(2.0) + 0.5 * n * m * std::log(std::numbers::pi) - log_siegel_gamma(m, 0.5 * n));
}

/// c_m = π^{(m²+m)/4} / ∏_{j=1}^m j·Γ(j/2), as printed for the eigenvalue
/// measure. Integrating over the ordered simplex Λ_m needs an extra m!.
inline double cm_constant(int m) {
  if (m < 1) throw DomainError("cm_constant requires m >= 1");
  double s = 0.25 * (m * m + m) * std::log(std::numbers::pi);
  for (int j = 1; j <= m; ++j) s -= std::log(static_cast<double>(j)) + std::lgamma(0.5 * j);
  return std::exp(s);
}

inline double factorial(int m) {
  double f = 1.0;
  for (int j = 2; j <= m; ++j) f *= j;
  return f;
}

/// A number of the form k/2, kept exact until converted.
struct HalfInteger {
  int twice = 0;
  double value() const { return 0.5 * twice; }
  friend bool operator==(HalfInteger, HalfInteger) = default;
};

/// Which constant multiplies the ordered-simplex integral of dν.
enum class Normalization {
  AsPrinted,       ///< c exactly as in the closed form (c_m · Γ-ratio)
  OrderedChamber,  ///< m! · c, the constant that makes c·∫_{Λ_m} dν = 1
};

struct ThmConstants {
  int n = 0;
  int i = 0;
  int ell = 0;
  int m = 0;
  HalfInteger alpha;  ///< (n − ℓ − i − 1)/2
  HalfInteger beta;   ///< (|ℓ − i| − 1)/2
  double c_m = 0.0;
  double c = 0.0;
  double chamber_factor = 1.0;  ///< m!

  double normalizer(Normalization which) const {
    return which == Normalization::AsPrinted ? c : chamber_factor * c;
  }
};

inline void check_grassmann_indices(int n, int i, int ell) {
  if (n < 2 || i < 1 || i > n - 1 || ell < 1 || ell > n - 1)
    throw DomainError("need 1 <= i, l <= n-1 (n=" + std::to_string(n) + ", i=" + std::to_string(i) +
                      ", l=" + std::to_string(ell) + ")");
}

inline ThmConstants theorem2_constants(int n, int i, int ell) {
  check_grassmann_indices(n, i, ell);
  if (i + ell > n)
    throw HypothesisViolated("i + l <= n required (i=" + std::to_string(i) + ", l=" + std::to_string(ell) +
                             ", n=" + std::to_string(n) + ")");
  ThmConstants k;
  k.n = n;
  k.i = i;
  k.ell = ell;
  k.m = std::min(i, ell);
  k.alpha = HalfInteger{n - ell - i - 1};
  k.beta = HalfInteger{std::abs(ell - i) - 1};
  k.c_m = cm_constant(k.m);
  const int p = k.m;
  const int other = (i <= ell) ? ell : i;
  const double log_ratio = log_siegel_gamma(p, 0.5 * n) - log_siegel_gamma(p, 0.5 * other) -
                           log_siegel_gamma(p, 0.5 * (n - other));
  k.c = k.c_m * std::exp(log_ratio);
  k.chamber_factor = factorial(k.m);
  return k;
}

/// c = σ_{ℓ−1}·σ_{n−ℓ−1} in the bi-spherical integration formula.
inline double theorem1_constant(int n, int ell) {
  if (ell < 1 || ell > n - 1) throw DomainError("theorem1 requires 1 <= l <= n-1");
  return sphere_area(ell) * sphere_area(n - ell);
}

}  // namespace grassinv

#endif  // GRASSINV_SPECFUN_HPP
