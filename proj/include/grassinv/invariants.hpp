#ifndef GRASSINV_INVARIANTS_HPP
#define GRASSINV_INVARIANTS_HPP

// Canonical-angle coordinates of a subspace relative to ℝ^ℓ (the last ℓ
// coordinate axes), the block-diagonal group K_ℓ = O(n−ℓ) × O(ℓ) acting on
// G_{n,i}, and the correspondence between K_ℓ-invariant functions and
// functions on the simplex Λ_m.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "grassinv/errors.hpp"
#include "grassinv/matrix.hpp"
#include "grassinv/mc.hpp"
#include "grassinv/report.hpp"
#include "grassinv/rng.hpp"
#include "grassinv/sampler.hpp"

namespace grassinv {

/// λ ∈ Λ_m: 1 ≥ λ₁ ≥ … ≥ λ_m ≥ 0, the squared cosines of the canonical angles.
class SpectralPoint {
 public:
  explicit SpectralPoint(std::vector<double> lambda) : lambda_(std::move(lambda)) {
    if (lambda_.empty()) throw DomainError("spectral point needs m >= 1");
    for (std::size_t j = 0; j < lambda_.size(); ++j) {
      if (!(lambda_[j] >= 0.0 && lambda_[j] <= 1.0)) throw DomainError("spectral coordinate outside [0, 1]");
      if (j > 0 && lambda_[j] > lambda_[j - 1]) throw DomainError("spectral coordinates must be descending");
    }
  }

  std::size_t m() const { return lambda_.size(); }
  std::span<const double> values() const { return lambda_; }
  double operator[](std::size_t j) const { return lambda_[j]; }

  /// Canonical angles ω_j = arccos √λ_j.
  std::vector<double> angles() const {
    std::vector<double> w;
    w.reserve(lambda_.size());
    for (double l : lambda_) w.push_back(std::acos(std::sqrt(l)));
    return w;
  }

 private:
  std::vector<double> lambda_;
};

namespace detail {

inline constexpr double kSpectrumSlack = 1e-9;

// Descending (eigen already sorts), clamped to [0, 1].
inline std::vector<double> clamp_unit(std::vector<double> values) {
  for (double& v : values) {
    if (v < -kSpectrumSlack || v > 1.0 + kSpectrumSlack)
      throw DomainError("eigenvalue " + std::to_string(v) + " outside [0, 1]");
    v = std::clamp(v, 0.0, 1.0);
  }
  return values;
}

// σ_ℓᵗ · P · σ_ℓ: the bottom-right ℓ×ℓ block of the projection.
inline SymMatrix reference_block(const Subspace& xi, std::size_t ell) {
  const std::size_t n = xi.n();
  return SymMatrix(xi.projection().dense().block(n - ell, ell, n - ell, ell));
}

inline void check_ell(const Subspace& xi, std::size_t ell) {
  if (ell < 1 || ell + 1 > xi.n()) throw DomainError("need 1 <= l <= n-1");
}

}  // namespace detail

/// Spectral coordinates of ξ with respect to ℝ^ℓ.
///
/// For i ≤ ℓ these are the eigenvalues of Θᵗ·Pr_{ℝ^ℓ}·Θ for an orthonormal
/// basis Θ of ξ; for i > ℓ, the eigenvalues of σ_ℓᵗ·Pr_ξ·σ_ℓ. The result has
/// m = min(i, ℓ) entries and does not depend on the basis.
inline SpectralPoint spectral_coords(const Subspace& xi, std::size_t ell) {
  detail::check_ell(xi, ell);
  const std::size_t n = xi.n();
  if (xi.i() <= ell) {
    const Frame theta = xi.basis();
    const DenseMatrix lower = theta.matrix().rows_range(n - ell, ell);  // σ_ℓᵗ Θ
    return SpectralPoint(detail::clamp_unit(eigenvalues(SymMatrix::gram(lower))));
  }
  return SpectralPoint(detail::clamp_unit(eigenvalues(detail::reference_block(xi, ell))));
}

/// All ℓ eigenvalues of σ_ℓᵗ·Pr_ξ·σ_ℓ (descending, unclamped). For i ≤ ℓ
/// its leading i entries coincide with spectral_coords.
inline std::vector<double> reference_block_spectrum(const Subspace& xi, std::size_t ell) {
  detail::check_ell(xi, ell);
  return eigenvalues(detail::reference_block(xi, ell));
}

/// γ = diag(A, B) with A ∈ O(n−ℓ), B ∈ O(ℓ).
class KEllElement {
 public:
  static constexpr double kTolerance = 1e-10;

  KEllElement(DenseMatrix block_a, DenseMatrix block_b) : a_(std::move(block_a)), b_(std::move(block_b)) {
    if (!a_.is_square() || !b_.is_square()) throw DimensionMismatch("K_l blocks must be square");
    if (orthonormality_defect(a_) > kTolerance || orthonormality_defect(b_) > kTolerance)
      throw DomainError("K_l blocks must be orthogonal");
  }

  std::size_t n() const { return a_.rows() + b_.rows(); }
  std::size_t ell() const { return b_.rows(); }
  const DenseMatrix& block_a() const { return a_; }
  const DenseMatrix& block_b() const { return b_; }
  DenseMatrix matrix() const { return block_diagonal(a_, b_); }

 private:
  DenseMatrix a_;
  DenseMatrix b_;
};

/// γξ, i.e. projection γ·Pr_ξ·γᵗ.
inline Subspace k_ell_action(const KEllElement& gamma, const Subspace& xi) {
  if (gamma.n() != xi.n()) throw DimensionMismatch("K_l element and subspace live in different dimensions");
  return Subspace(congruence(gamma.matrix(), xi.projection()));
}

inline KEllElement random_k_ell(std::size_t n, std::size_t ell, Rng& rng) {
  if (ell < 1 || ell + 1 > n) throw DomainError("need 1 <= l <= n-1");
  DenseMatrix a = haar_orthogonal(n - ell, rng);
  DenseMatrix b = haar_orthogonal(ell, rng);
  return KEllElement(std::move(a), std::move(b));
}

/// A real function on G_{n,i}. It only ever sees the projection.
struct InvariantFn {
  std::string name;
  std::function<double(const Subspace&)> eval;

  double operator()(const Subspace& xi) const { return eval(xi); }
};

/// A function on Λ_m (receives λ sorted descending).
struct SimplexFn {
  std::string name;
  std::function<double(std::span<const double>)> eval;

  double operator()(std::span<const double> lambda) const { return eval(lambda); }
};

/// Registry: "one", "sum", "prod", "max", "poly:c0,c1,..." where
/// poly evaluates Σ_k c_k (Σ_j λ_j)^k. All entries are symmetric in λ.
inline SimplexFn parse_f0(std::string_view descriptor) {
  const std::string name(descriptor);
  if (descriptor == "one") return {name, [](std::span<const double>) { return 1.0; }};
  if (descriptor == "sum")
    return {name, [](std::span<const double> l) {
              double s = 0.0;
              for (double x : l) s += x;
              return s;
            }};
  if (descriptor == "prod")
    return {name, [](std::span<const double> l) {
              double p = 1.0;
              for (double x : l) p *= x;
              return p;
            }};
  if (descriptor == "max")
    return {name, [](std::span<const double> l) {
              double mx = 0.0;
              for (double x : l) mx = std::max(mx, x);
              return mx;
            }};
  constexpr std::string_view kPoly = "poly:";
  if (descriptor.substr(0, kPoly.size()) == kPoly) {
    std::vector<double> coeffs;
    std::string_view rest = descriptor.substr(kPoly.size());
    while (!rest.empty()) {
      const std::size_t comma = rest.find(',');
      const std::string_view token = rest.substr(0, comma);
      double c = 0.0;
      const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), c);
      if (ec != std::errc{} || end != token.data() + token.size() || token.empty() || !std::isfinite(c))
        throw DomainError("bad poly coefficient '" + std::string(token) + "'");
      coeffs.push_back(c);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
      if (rest.empty()) throw DomainError("trailing comma in poly descriptor");
    }
    if (coeffs.empty()) throw DomainError("poly descriptor needs at least one coefficient");
    return {name, [coeffs](std::span<const double> l) {
              double s = 0.0;
              for (double x : l) s += x;
              double acc = 0.0;
              for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * s + coeffs[k];
              return acc;
            }};
  }
  throw DomainError("unknown f0 '" + name + "' (expected one|sum|prod|max|poly:<coefficients>)");
}

/// ξ ↦ f0(spectral_coords(ξ, ℓ)).
inline InvariantFn lift(SimplexFn f0, std::size_t n, std::size_t i, std::size_t ell) {
  if (n < 2 || i < 1 || i + 1 > n || ell < 1 || ell + 1 > n) throw DomainError("lift needs 1 <= i, l <= n-1");
  std::string name = "lift(" + f0.name + ")";
  return {std::move(name), [f0 = std::move(f0), ell](const Subspace& xi) { return f0(spectral_coords(xi, ell).values()); }};
}

/// trace(Pr_ξ · Pr_{ℝ^ℓ}).
inline InvariantFn trace_with_reference(std::size_t ell) {
  return {"trace_ref", [ell](const Subspace& xi) { return detail::reference_block(xi, ell).trace(); }};
}

/// e₁ᵗ·Pr_ξ·e₁; not K_ℓ-invariant once n − ℓ ≥ 2.
inline InvariantFn first_axis_weight() {
  return {"e1", [](const Subspace& xi) { return xi.projection()(0, 0); }};
}

inline InvariantFn constant_fn(double value) {
  return {"const", [value](const Subspace&) { return value; }};
}

/// Random search for a K_ℓ pair (ξ, γ) with |f(γξ) − f(ξ)| ≥ tol.
/// lhs = max deviation seen, rhs = 0, pass iff every deviation < tol.
inline VerifyReport invariance_test(const InvariantFn& f, std::size_t n, std::size_t i, std::size_t ell,
                                    std::size_t trials, Rng& rng, double tol) {
  if (trials < 1) throw DomainError("invariance_test needs trials >= 1");
  if (i < 1 || i + 1 > n || ell < 1 || ell + 1 > n) throw DomainError("need 1 <= i, l <= n-1");
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Subspace xi = haar_grassmann(n, i, rng);
    const KEllElement gamma = random_k_ell(n, ell, rng);
    worst = std::max(worst, std::abs(f(k_ell_action(gamma, xi)) - f(xi)));
  }
  VerifyReport r;
  r.identity = "invariance";
  r.params = {{"n", double(n)}, {"i", double(i)}, {"l", double(ell)}, {"tol", tol}};
  r.lhs = worst;
  r.rhs = 0.0;
  r.z = 0.0;
  r.pass = worst < tol;
  r.seed = rng.seed();
  r.samples = trials;
  r.extras = {{"tolerance", tol}};
  return r;
}

}  // namespace grassinv

#endif  // GRASSINV_INVARIANTS_HPP
