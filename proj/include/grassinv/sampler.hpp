#ifndef GRASSINV_SAMPLER_HPP
#define GRASSINV_SAMPLER_HPP

// Haar sampling on Stiefel and Grassmann manifolds and the coordinate maps
// used by the integration formulas: polar (x = v·r^{1/2}), bi-spherical
// (θ = [u sin ω; w cos ω]) and bi-Stiefel (v = [u₁ r^{1/2}; u₂ (I − r)^{1/2}]).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "grassinv/errors.hpp"
#include "grassinv/matrix.hpp"
#include "grassinv/rng.hpp"

namespace grassinv {

/// Point of V_{n,m}: an n×m matrix with orthonormal columns.
class Frame {
 public:
  static constexpr double kTolerance = 1e-8;

  explicit Frame(DenseMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() < matrix_.cols()) throw DimensionMismatch("frame needs n >= m");
    const double defect = orthonormality_defect(matrix_);
    if (!(defect <= kTolerance))
      throw DomainError("columns are not orthonormal (defect " + std::to_string(defect) + ")");
  }

  std::size_t n() const { return matrix_.rows(); }
  std::size_t m() const { return matrix_.cols(); }
  const DenseMatrix& matrix() const { return matrix_; }
  double operator()(std::size_t r, std::size_t c) const { return matrix_(r, c); }

 private:
  DenseMatrix matrix_;
};

/// Point of G_{n,i}, held as its orthogonal projection so that equality
/// does not depend on a choice of basis.
class Subspace {
 public:
  static constexpr double kTolerance = 1e-9;

  explicit Subspace(const Frame& basis) : projection_(SymMatrix(basis.matrix() * basis.matrix().transpose())) {
    dim_ = basis.m();
  }

  explicit Subspace(SymMatrix projection) : projection_(std::move(projection)) {
    const DenseMatrix& p = projection_.dense();
    const double idem = (p * p - p).max_abs();
    if (!(idem <= kTolerance)) throw DomainError("projection is not idempotent");
    const double tr = projection_.trace();
    const double rounded = std::round(tr);
    if (std::abs(tr - rounded) > kTolerance || rounded < 1.0 || rounded > static_cast<double>(p.rows()) - 1.0)
      throw DomainError("projection trace is not an integer in [1, n-1]");
    dim_ = static_cast<std::size_t>(rounded);
  }

  std::size_t n() const { return projection_.dim(); }
  std::size_t i() const { return dim_; }
  const SymMatrix& projection() const { return projection_; }

  /// An orthonormal basis (top eigenvectors of the projection).
  Frame basis() const {
    const EigenResult e = sym_eig(projection_);
    return Frame(e.vectors.block(0, n(), 0, dim_));
  }

 private:
  SymMatrix projection_;
  std::size_t dim_ = 0;
};

/// Span of the given coordinate axes (0-based) in ℝⁿ.
inline Subspace coordinate_subspace(std::size_t n, std::span<const std::size_t> axes) {
  DenseMatrix basis(n, axes.size());
  for (std::size_t j = 0; j < axes.size(); ++j) {
    if (axes[j] >= n) throw DomainError("axis index out of range");
    basis(axes[j], j) = 1.0;
  }
  return Subspace(Frame(std::move(basis)));
}

/// σ_ℓ = [0; I_ℓ]: the last ℓ coordinate axes, spanning ℝ^ℓ in ℝⁿ = ℝ^{n−ℓ} ⊕ ℝ^ℓ.
inline Frame reference_frame(std::size_t n, std::size_t ell) {
  if (ell < 1 || ell > n) throw DomainError("reference frame needs 1 <= l <= n");
  DenseMatrix s(n, ell);
  for (std::size_t j = 0; j < ell; ++j) s(n - ell + j, j) = 1.0;
  return Frame(std::move(s));
}

inline DenseMatrix gaussian_matrix(std::size_t n, std::size_t m, Rng& rng) {
  DenseMatrix g(n, m);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < m; ++c) g(r, c) = rng.normal();
  return g;
}

/// Haar-distributed frame: Gaussian matrix, then QR with positive diag(R).
inline Frame haar_stiefel(std::size_t n, std::size_t m, Rng& rng) {
  if (m < 1 || m > n) throw DomainError("haar_stiefel needs 1 <= m <= n");
  return Frame(qr_decompose(gaussian_matrix(n, m, rng)).q);
}

inline DenseMatrix haar_orthogonal(std::size_t n, Rng& rng) { return haar_stiefel(n, n, rng).matrix(); }

inline Subspace haar_grassmann(std::size_t n, std::size_t i, Rng& rng) {
  if (i < 1 || i + 1 > n) throw DomainError("haar_grassmann needs 1 <= i <= n-1");
  return Subspace(haar_stiefel(n, i, rng));
}

struct PolarResult {
  Frame v;
  SymMatrix r;  ///< xᵗx
};

/// x = v · r^{1/2} with r = xᵗx. Rank-deficient input throws RankDeficient.
inline PolarResult polar_decompose(const DenseMatrix& x) {
  (void)qr_decompose(x);  // rank check
  SymMatrix r = SymMatrix::gram(x);
  const SymMatrix r_inv_half = pd_inv_sqrt(r);
  return {Frame(x * r_inv_half.dense()), std::move(r)};
}

inline double euclidean_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// θ = [u·sin ω; w·cos ω] ∈ S^{n−1} for u ∈ S^{n−ℓ−1}, w ∈ S^{ℓ−1}, ω ∈ [0, π/2].
inline std::vector<double> bispherical_compose(std::span<const double> u, std::span<const double> w, double omega) {
  if (!(omega >= 0.0 && omega <= 0.5 * std::numbers::pi)) throw DomainError("omega must lie in [0, pi/2]");
  if (std::abs(euclidean_norm(u) - 1.0) > 1e-9 || std::abs(euclidean_norm(w) - 1.0) > 1e-9)
    throw DomainError("u and w must be unit vectors");
  std::vector<double> theta;
  theta.reserve(u.size() + w.size());
  const double s = std::sin(omega);
  const double c = std::cos(omega);
  for (double x : u) theta.push_back(x * s);
  for (double x : w) theta.push_back(x * c);
  return theta;
}

/// v = [u₁ r^{1/2}; u₂ (I − r)^{1/2}] with 0 ≤ r ≤ I.
inline Frame bistiefel_compose(const Frame& u1, const Frame& u2, const SymMatrix& r) {
  const std::size_t m = r.dim();
  if (u1.m() != m || u2.m() != m) throw DimensionMismatch("bistiefel_compose: frame widths must equal dim(r)");
  const EigenResult e = sym_eig(r);
  for (double l : e.values)
    if (l < -1e-10 || l > 1.0 + 1e-10)
      throw SpectrumOutOfRange("eigenvalue " + std::to_string(l) + " outside [0, 1]");
  const SymMatrix sqrt_r = detail::spectral_apply(e, [](double l) { return std::sqrt(std::clamp(l, 0.0, 1.0)); });
  const SymMatrix sqrt_c =
      detail::spectral_apply(e, [](double l) { return std::sqrt(1.0 - std::clamp(l, 0.0, 1.0)); });
  return Frame(vstack(u1.matrix() * sqrt_r.dense(), u2.matrix() * sqrt_c.dense()));
}

struct BiStiefelCoords {
  Frame u1;     ///< V_{n−k,m}
  Frame u2;     ///< V_{k,m}
  SymMatrix r;  ///< Gram matrix of the top (n−k)-row block
};

inline BiStiefelCoords bistiefel_decompose(const Frame& v, std::size_t k) {
  const std::size_t n = v.n();
  const std::size_t m = v.m();
  if (k < 1 || k + 1 > n || m > std::min(k, n - k))
    throw DomainError("bistiefel_decompose needs m <= min(k, n-k)");
  const DenseMatrix top = v.matrix().rows_range(0, n - k);
  const DenseMatrix bottom = v.matrix().rows_range(n - k, k);
  PolarResult p1 = polar_decompose(top);
  PolarResult p2 = polar_decompose(bottom);
  return {std::move(p1.v), std::move(p2.v), std::move(p1.r)};
}

namespace detail {

// (A+B)^{-1/2} A (A+B)^{-1/2}, spectrum clamped to [0, 1].
inline SymMatrix beta_ratio(const SymMatrix& a, const SymMatrix& b) {
  const SymMatrix s_inv_half = pd_inv_sqrt(SymMatrix(a.dense() + b.dense()));
  const SymMatrix raw = congruence(s_inv_half.dense(), a);
  return spectral_apply(sym_eig(raw), [](double l) { return std::clamp(l, 0.0, 1.0); });
}

}  // namespace detail

/// Matrix-variate Beta: A = g₁ᵗg₁, B = g₂ᵗg₂ with Gaussian g₁ (ν₁×m), g₂ (ν₂×m).
inline SymMatrix sample_matrix_beta(std::size_t nu1, std::size_t nu2, std::size_t m, Rng& rng) {
  if (m < 1 || nu1 < m || nu2 < m) throw DomainError("sample_matrix_beta needs nu1, nu2 >= m >= 1");
  const SymMatrix a = SymMatrix::gram(gaussian_matrix(nu1, m, rng));
  const SymMatrix b = SymMatrix::gram(gaussian_matrix(nu2, m, rng));
  return detail::beta_ratio(a, b);
}

/// Wishart_m(dof, I) by the Bartlett decomposition; dof may be any real > m − 1.
inline SymMatrix sample_wishart(double dof, std::size_t m, Rng& rng) {
  if (!(dof > static_cast<double>(m) - 1.0)) throw DomainError("Wishart dof must exceed m - 1");
  DenseMatrix l(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    l(j, j) = std::sqrt(rng.chi_square(dof - static_cast<double>(j)));
    for (std::size_t k = 0; k < j; ++k) l(j, k) = rng.normal();
  }
  return SymMatrix(l * l.transpose());
}

/// Matrix Beta with real degrees of freedom (ν₁, ν₂ > m − 1).
inline SymMatrix sample_matrix_beta_real(double nu1, double nu2, std::size_t m, Rng& rng) {
  const SymMatrix a = sample_wishart(nu1, m, rng);
  const SymMatrix b = sample_wishart(nu2, m, rng);
  return detail::beta_ratio(a, b);
}

}  // namespace grassinv

#endif  // GRASSINV_SAMPLER_HPP
