#ifndef GRASSINV_QUADRATURE_HPP
#define GRASSINV_QUADRATURE_HPP

// Gauss rules (Jacobi on (0,1), generalized Laguerre on (0,∞)) and
// integration of functions on the simplex Λ_m against the Jacobi-ensemble
// measure dν(λ) = ∏_{j<k}(λ_j − λ_k) ∏_j λ_j^a (1 − λ_j)^b dλ_j.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "grassinv/errors.hpp"
#include "grassinv/invariants.hpp"
#include "grassinv/matrix.hpp"
#include "grassinv/specfun.hpp"

namespace grassinv {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int degree = 0;  ///< exact for polynomials up to this degree

  template <class Fn>
  double integrate(Fn&& f) const {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * f(nodes[k]);
    return s;
  }
};

namespace detail {

// Gauss rule from the monic three-term recurrence
//   p_{k+1}(x) = (x − a_k) p_k(x) − b_k p_{k−1}(x),  μ₀ = ∫ w.
// Golub–Welsch eigenvalues seed Newton iterations on the orthonormal
// polynomial p̂_q; weights are Christoffel numbers 1 / Σ_{k<q} p̂_k(x)².
inline QuadRule gauss_from_recurrence(const std::vector<double>& a, const std::vector<double>& b, double mu0) {
  const std::size_t q = a.size();
  std::vector<double> guesses;
  if (q == 1) {
    guesses = {a[0]};
  } else {
    DenseMatrix jacobi(q, q);
    for (std::size_t k = 0; k < q; ++k) {
      jacobi(k, k) = a[k];
      if (k + 1 < q) {
        jacobi(k, k + 1) = std::sqrt(b[k + 1]);
        jacobi(k + 1, k) = std::sqrt(b[k + 1]);
      }
    }
    guesses = sym_eig(SymMatrix(jacobi), 200).values;
    std::reverse(guesses.begin(), guesses.end());
  }

  // p̂_0..p̂_{q} and derivatives at x.
  auto evaluate = [&](double x, double& pq, double& dpq, double& christoffel_sum) {
    double p_prev = 0.0;
    double p = 1.0 / std::sqrt(mu0);
    double d_prev = 0.0;
    double d = 0.0;
    christoffel_sum = p * p;
    for (std::size_t k = 0; k < q; ++k) {
      const double sb_next = std::sqrt(b[k + 1]);
      const double sb = k == 0 ? 0.0 : std::sqrt(b[k]);
      const double p_next = ((x - a[k]) * p - sb * p_prev) / sb_next;
      const double d_next = (p + (x - a[k]) * d - sb * d_prev) / sb_next;
      p_prev = p;
      p = p_next;
      d_prev = d;
      d = d_next;
      if (k + 1 < q) christoffel_sum += p * p;
    }
    pq = p;
    dpq = d;
  };

  QuadRule rule;
  rule.degree = static_cast<int>(2 * q - 1);
  rule.nodes.resize(q);
  rule.weights.resize(q);
  for (std::size_t k = 0; k < q; ++k) {
    double x = guesses[k];
    double pq = 0.0;
    double dpq = 0.0;
    double csum = 0.0;
    for (int it = 0; it < 8; ++it) {
      evaluate(x, pq, dpq, csum);
      if (dpq == 0.0) break;
      const double step = pq / dpq;
      x -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    evaluate(x, pq, dpq, csum);
    rule.nodes[k] = x;
    rule.weights[k] = 1.0 / csum;
  }
  return rule;
}

}  // namespace detail

/// q-point Gauss rule on (0,1) for the weight λ^alpha (1 − λ)^beta.
inline QuadRule gauss_jacobi_rule(int q, double alpha, double beta) {
  if (q < 1) throw DomainError("quadrature order must be >= 1");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("Gauss-Jacobi needs alpha, beta > -1");
  // Jacobi on [-1,1] with weight (1−x)^A (1+x)^B, then λ = (1+x)/2.
  const double A = beta;
  const double B = alpha;
  const double s = A + B;
  std::vector<double> a(q);
  std::vector<double> b(q + 1);
  for (int k = 0; k < q; ++k) {
    double ak;
    if (k == 0)
      ak = (B - A) / (s + 2.0);
    else
      ak = (B * B - A * A) / ((2.0 * k + s) * (2.0 * k + s + 2.0));
    a[k] = 0.5 * (ak + 1.0);
  }
  for (int k = 1; k <= q; ++k) {
    double bk;
    if (k == 1) {
      bk = 4.0 * (A + 1.0) * (B + 1.0) / ((s + 2.0) * (s + 2.0) * (s + 3.0));
    } else {
      const double t = 2.0 * k + s;
      bk = 4.0 * k * (k + A) * (k + B) * (k + s) / (t * t * (t + 1.0) * (t - 1.0));
    }
    b[k] = 0.25 * bk;
  }
  const double mu0 = std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 2.0));
  b[0] = mu0;
  return detail::gauss_from_recurrence(a, b, mu0);
}

/// q-point Gauss rule on (0,∞) for the weight x^a e^{−x}.
inline QuadRule gauss_laguerre_rule(int q, double a) {
  if (q < 1) throw DomainError("quadrature order must be >= 1");
  if (!(a > -1.0)) throw DomainError("Gauss-Laguerre needs a > -1");
  std::vector<double> ak(q);
  std::vector<double> bk(q + 1);
  for (int k = 0; k < q; ++k) ak[k] = 2.0 * k + a + 1.0;
  for (int k = 1; k <= q; ++k) bk[k] = k * (k + a);
  const double mu0 = std::exp(std::lgamma(a + 1.0));
  bk[0] = mu0;
  return detail::gauss_from_recurrence(ak, bk, mu0);
}

enum class Convention {
  AsStated,           ///< λ^α (1 − λ)^β
  ComplementSwapped,  ///< λ^β (1 − λ)^α
};

inline std::string to_string(Convention c) {
  return c == Convention::AsStated ? "as_stated" : "complement_swapped";
}
inline std::string to_string(Normalization n) {
  return n == Normalization::AsPrinted ? "as_printed" : "ordered_chamber";
}

/// Convention whose densities agree with sampled canonical angles
/// (selected by the (3,1,1) and (5,2,1) Monte Carlo checks).
inline constexpr Convention kDefaultConvention = Convention::ComplementSwapped;
/// Normalization under which c·∫_{Λ_m} dν = 1.
inline constexpr Normalization kDefaultNormalization = Normalization::OrderedChamber;

struct JacobiWeight {
  int m = 1;
  double alpha = 0.0;
  double beta = 0.0;
  Convention convention = kDefaultConvention;

  JacobiWeight() = default;
  JacobiWeight(int m_, double alpha_, double beta_, Convention conv = kDefaultConvention)
      : m(m_), alpha(alpha_), beta(beta_), convention(conv) {
    if (m < 1) throw DomainError("JacobiWeight needs m >= 1");
    if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("JacobiWeight needs alpha, beta > -1");
  }

  static JacobiWeight for_theorem(const ThmConstants& k, Convention conv = kDefaultConvention) {
    return JacobiWeight(k.m, k.alpha.value(), k.beta.value(), conv);
  }

  /// Exponent on λ after the convention is applied.
  double lambda_exponent() const { return convention == Convention::AsStated ? alpha : beta; }
  /// Exponent on 1 − λ after the convention is applied.
  double complement_exponent() const { return convention == Convention::AsStated ? beta : alpha; }
};

inline constexpr int kMaxQuadratureRank = 4;

namespace detail {

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

inline void check_rank(int m) {
  if (m > kMaxQuadratureRank)
    throw DomainError("deterministic simplex quadrature supports m <= " + std::to_string(kMaxQuadratureRank));
}

}  // namespace detail

/// ∫_{Λ_m} f0 dν over the ordered simplex 1 ≥ λ₁ ≥ … ≥ λ_m ≥ 0.
///
/// m = 1 uses the q-point Gauss–Jacobi rule directly. For m ≥ 2 the chamber
/// is mapped onto [0,1]^m by λ_j = sin²θ_j, θ_j = (π/2)·t₁⋯t_j. The
/// separable endpoint powers t_k^{p(m−k+1)+m−k} and (1 − t₁)^r, with
/// p = 2a + 1 and r = 2b + 1, go into per-axis Gauss–Jacobi weights; what
/// remains is smooth, so the tensor rule converges spectrally for
/// half-integer exponents.
inline double simplex_integrate(const SimplexFn& f0, const JacobiWeight& w, int q) {
  const int m = w.m;
  const double a = w.lambda_exponent();
  const double b = w.complement_exponent();
  detail::check_rank(m);

  if (m == 1) {
    const QuadRule rule = gauss_jacobi_rule(q, a, b);
    return rule.integrate([&](double x) {
      const double lam[1] = {x};
      return f0(lam);
    });
  }

  const double p = 2.0 * a + 1.0;
  const double r = 2.0 * b + 1.0;
  const double half_pi = 0.5 * std::numbers::pi;

  std::vector<QuadRule> rules;
  rules.reserve(m);
  for (int k = 1; k <= m; ++k) {
    const double ea = p * (m - k + 1) + (m - k);
    const double eb = (k == 1) ? r : 0.0;
    rules.push_back(gauss_jacobi_rule(q, ea, eb));
  }
  const double constant = std::pow(2.0, m) * std::pow(half_pi, m + m * p + r);

  std::vector<double> theta(m);
  std::vector<double> lambda(m);
  double total = 0.0;

  // Depth-first over the tensor grid; `weight` carries the product of
  // quadrature weights and the smooth per-coordinate factors so far.
  auto recurse = [&](auto&& self, int level, double theta_prev, double weight) -> void {
    const QuadRule& rule = rules[level];
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double th = theta_prev * rule.nodes[k];
      double factor = rule.weights[k] * std::pow(detail::sinc(th), p);
      if (level == 0)
        factor *= std::pow(detail::sinc(half_pi - th), r);
      else
        factor *= std::pow(std::cos(th), r);
      theta[level] = th;
      const double s = std::sin(th);
      lambda[level] = s * s;
      if (level + 1 < m) {
        self(self, level + 1, th, weight * factor);
      } else {
        double vandermonde = 1.0;
        for (int j = 0; j < m; ++j)
          for (int l = j + 1; l < m; ++l) vandermonde *= lambda[j] - lambda[l];
        total += weight * factor * vandermonde * f0(lambda);
      }
    }
  };
  recurse(recurse, 0, half_pi, 1.0);
  return constant * total;
}

/// Same integral by symmetrization: (1/m!)·∫_{[0,1]^m} f0(sorted λ)·|V(λ)|
/// against the tensor Gauss–Jacobi rule. The |V| kink limits it to
/// algebraic convergence; kept as an independent cross-check.
inline double simplex_integrate_symmetrized(const SimplexFn& f0, const JacobiWeight& w, int q) {
  const int m = w.m;
  detail::check_rank(m);
  const QuadRule rule = gauss_jacobi_rule(q, w.lambda_exponent(), w.complement_exponent());
  const std::size_t nq = rule.nodes.size();
  std::vector<std::size_t> idx(m, 0);
  std::vector<double> lambda(m);
  double total = 0.0;
  for (;;) {
    double weight = 1.0;
    for (int j = 0; j < m; ++j) {
      lambda[j] = rule.nodes[idx[j]];
      weight *= rule.weights[idx[j]];
    }
    double vandermonde = 1.0;
    for (int j = 0; j < m; ++j)
      for (int l = j + 1; l < m; ++l) vandermonde *= std::abs(lambda[j] - lambda[l]);
    if (vandermonde != 0.0) {
      std::sort(lambda.begin(), lambda.end(), std::greater<>());
      total += weight * vandermonde * f0(lambda);
    }
    int j = m - 1;
    while (j >= 0 && ++idx[j] == nq) idx[j--] = 0;
    if (j < 0) break;
  }
  return total / factorial(m);
}

}  // namespace grassinv

#endif  // GRASSINV_QUADRATURE_HPP
