#ifndef GRASSINV_MATRIX_HPP
#define GRASSINV_MATRIX_HPP

// Small dense real linear algebra: row-major matrices, Householder QR,
// cyclic Jacobi eigensolver, PSD square roots and determinants.
// Sizes in this library never exceed a few dozen, so everything is dense
// and unblocked.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "grassinv/errors.hpp"

namespace grassinv {

class DenseMatrix {
 public:
  DenseMatrix() = default;

  /// Zero matrix of the given shape.
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) throw DomainError("matrix dimensions must be positive");
  }

  /// Row-major entries; every entry must be finite.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw DomainError("matrix dimensions must be positive");
    if (data_.size() != rows * cols) throw DimensionMismatch("entry count does not match shape");
    for (double x : data_)
      if (!std::isfinite(x)) throw DomainError("non-finite matrix entry");
  }

  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows_list) {
    rows_ = rows_list.size();
    cols_ = rows_ ? rows_list.begin()->size() : 0;
    if (rows_ == 0 || cols_ == 0) throw DomainError("matrix dimensions must be positive");
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows_list) {
      if (row.size() != cols_) throw DimensionMismatch("ragged initializer");
      for (double x : row) {
        if (!std::isfinite(x)) throw DomainError("non-finite matrix entry");
        data_.push_back(x);
      }
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static DenseMatrix diagonal(std::span<const double> d) {
    DenseMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  /// Column vector.
  static DenseMatrix column(std::span<const double> v) {
    return DenseMatrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> entries() const { return data_; }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  /// Sub-block of nr rows starting at r0 and nc columns starting at c0.
  DenseMatrix block(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("block out of range");
    DenseMatrix b(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
  }

  DenseMatrix rows_range(std::size_t r0, std::size_t nr) const { return block(r0, nr, 0, cols_); }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  double frobenius() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  DenseMatrix& operator+=(const DenseMatrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  DenseMatrix& operator-=(const DenseMatrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  DenseMatrix& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(DenseMatrix a, double s) { return a *= s; }
  friend DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shapes");
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  void check_same_shape(const DenseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// aᵗ·b without forming the transpose.
inline DenseMatrix transpose_times(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("transpose_times shapes");
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k)
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aki * b(k, j);
    }
  return c;
}

/// [top; bottom]
inline DenseMatrix vstack(const DenseMatrix& top, const DenseMatrix& bottom) {
  if (top.cols() != bottom.cols()) throw DimensionMismatch("vstack column counts differ");
  DenseMatrix s(top.rows() + bottom.rows(), top.cols());
  for (std::size_t r = 0; r < top.rows(); ++r)
    for (std::size_t c = 0; c < top.cols(); ++c) s(r, c) = top(r, c);
  for (std::size_t r = 0; r < bottom.rows(); ++r)
    for (std::size_t c = 0; c < top.cols(); ++c) s(top.rows() + r, c) = bottom(r, c);
  return s;
}

inline DenseMatrix block_diagonal(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix d(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) d(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) d(a.rows() + r, a.cols() + c) = b(r, c);
  return d;
}

/// max |aᵗa − I|
inline double orthonormality_defect(const DenseMatrix& a) {
  DenseMatrix g = transpose_times(a, a);
  g -= DenseMatrix::identity(a.cols());
  return g.max_abs();
}

/// Symmetric matrix, stored full. Symmetry is exact by construction.
class SymMatrix {
 public:
  SymMatrix() = default;

  /// Symmetrizes a nearly symmetric input; rejects asymmetry above
  /// `rel_tol` times the largest entry.
  explicit SymMatrix(const DenseMatrix& a, double rel_tol = 1e-8) : full_(a) {
    if (!a.is_square()) throw DimensionMismatch("symmetric matrix must be square");
    const double scale = std::max(a.max_abs(), 1.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = i + 1; j < a.cols(); ++j) {
        if (std::abs(a(i, j) - a(j, i)) > rel_tol * scale)
          throw DomainError("matrix is not symmetric");
        const double avg = 0.5 * (a(i, j) + a(j, i));
        full_(i, j) = avg;
        full_(j, i) = avg;
      }
  }

  SymMatrix(std::initializer_list<std::initializer_list<double>> rows) : SymMatrix(DenseMatrix(rows)) {}

  static SymMatrix identity(std::size_t n) { return SymMatrix(DenseMatrix::identity(n)); }
  static SymMatrix diagonal(std::span<const double> d) { return SymMatrix(DenseMatrix::diagonal(d)); }

  /// aᵗa
  static SymMatrix gram(const DenseMatrix& a) { return SymMatrix(transpose_times(a, a)); }

  std::size_t dim() const { return full_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return full_(i, j); }
  const DenseMatrix& dense() const { return full_; }
  double trace() const { return full_.trace(); }

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  DenseMatrix full_;
};

struct QrResult {
  DenseMatrix q;        ///< rows × cols, orthonormal columns
  DenseMatrix r_upper;  ///< cols × cols, upper triangular, positive diagonal
};

/// Householder QR with the sign convention diag(r_upper) > 0, which makes
/// q Haar-distributed when x has iid Gaussian entries.
inline QrResult qr_decompose(const DenseMatrix& x) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  if (n < m) throw DimensionMismatch("qr_decompose requires rows >= cols");

  double max_col_norm = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += x(r, c) * x(r, c);
    max_col_norm = std::max(max_col_norm, std::sqrt(s));
  }

  DenseMatrix a = x;
  std::vector<std::vector<double>> reflectors(m);
  for (std::size_t k = 0; k < m; ++k) {
    double norm = 0.0;
    for (std::size_t r = k; r < n; ++r) norm += a(r, k) * a(r, k);
    norm = std::sqrt(norm);
    std::vector<double> v(n - k);
    for (std::size_t r = k; r < n; ++r) v[r - k] = a(r, k);
    const double alpha = (a(k, k) > 0.0) ? -norm : norm;
    v[0] -= alpha;
    double vnorm = 0.0;
    for (double vi : v) vnorm += vi * vi;
    vnorm = std::sqrt(vnorm);
    if (vnorm > 0.0) {
      for (double& vi : v) vi /= vnorm;
      for (std::size_t c = k; c < m; ++c) {
        double dot = 0.0;
        for (std::size_t r = k; r < n; ++r) dot += v[r - k] * a(r, c);
        for (std::size_t r = k; r < n; ++r) a(r, c) -= 2.0 * v[r - k] * dot;
      }
    }
    reflectors[k] = std::move(v);
  }

  DenseMatrix r_upper(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) r_upper(i, j) = a(i, j);

  for (std::size_t i = 0; i < m; ++i)
    if (!(std::abs(r_upper(i, i)) >= 1e-10 * max_col_norm) || max_col_norm == 0.0)
      throw RankDeficient("column " + std::to_string(i) + " is numerically dependent");

  // Q = H_0 H_1 ... H_{m-1} applied to the first m columns of I.
  DenseMatrix q(n, m);
  for (std::size_t c = 0; c < m; ++c) q(c, c) = 1.0;
  for (std::size_t k = m; k-- > 0;) {
    const auto& v = reflectors[k];
    for (std::size_t c = 0; c < m; ++c) {
      double dot = 0.0;
      for (std::size_t r = k; r < n; ++r) dot += v[r - k] * q(r, c);
      for (std::size_t r = k; r < n; ++r) q(r, c) -= 2.0 * v[r - k] * dot;
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (r_upper(i, i) < 0.0) {
      for (std::size_t j = i; j < m; ++j) r_upper(i, j) = -r_upper(i, j);
      for (std::size_t r = 0; r < n; ++r) q(r, i) = -q(r, i);
    }
  }
  return {std::move(q), std::move(r_upper)};
}

struct EigenResult {
  std::vector<double> values;  ///< descending
  DenseMatrix vectors;         ///< column j is the eigenvector of values[j]
};

/// Cyclic Jacobi eigensolver: s = vectors · diag(values) · vectorsᵗ.
/// Stops when the off-diagonal norm drops below 1e-13 of the Frobenius
/// norm; throws NoConvergence after `max_sweeps`.
inline EigenResult sym_eig(const SymMatrix& s, int max_sweeps = 50) {
  const std::size_t n = s.dim();
  DenseMatrix a = s.dense();
  DenseMatrix v = DenseMatrix::identity(n);
  const double threshold = 1e-13 * a.frobenius();

  auto off_norm = [&] {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(off);
  };

  int sweep = 0;
  while (off_norm() > threshold) {
    if (sweep++ >= max_sweeps)
      throw NoConvergence("Jacobi eigensolver exceeded " + std::to_string(max_sweeps) + " sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenResult out{std::vector<double>(n), DenseMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

namespace detail {

inline constexpr double kPsdClamp = 1e-10;

// vectors · diag(g(values)) · vectorsᵗ
template <class Fn>
SymMatrix spectral_apply(const EigenResult& e, Fn&& g) {
  const std::size_t n = e.values.size();
  DenseMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double gk = g(e.values[k]);
    if (gk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double vik = e.vectors(i, k) * gk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * e.vectors(j, k);
    }
  }
  return SymMatrix(out);
}

inline void require_psd(const EigenResult& e, double scale) {
  for (double l : e.values)
    if (l < -kPsdClamp * std::max(scale, 1.0))
      throw NotPSD("eigenvalue " + std::to_string(l) + " is negative");
}

}  // namespace detail

/// Symmetric PSD square root. Eigenvalues in [-1e-10, 0) are clamped to 0.
inline SymMatrix psd_sqrt(const SymMatrix& s) {
  const EigenResult e = sym_eig(s);
  detail::require_psd(e, e.values.empty() ? 0.0 : std::abs(e.values.front()));
  return detail::spectral_apply(e, [](double l) { return l > 0.0 ? std::sqrt(l) : 0.0; });
}

/// s^{-1/2} for positive definite s.
inline SymMatrix pd_inv_sqrt(const SymMatrix& s) {
  const EigenResult e = sym_eig(s);
  for (double l : e.values)
    if (!(l > 0.0)) throw NotPSD("matrix is not positive definite");
  return detail::spectral_apply(e, [](double l) { return 1.0 / std::sqrt(l); });
}

/// Product of eigenvalues.
inline double det(const SymMatrix& s) {
  const EigenResult e = sym_eig(s);
  double d = 1.0;
  for (double l : e.values) d *= l;
  return d;
}

/// Eigenvalues only, descending.
inline std::vector<double> eigenvalues(const SymMatrix& s) { return sym_eig(s).values; }

inline SymMatrix congruence(const DenseMatrix& g, const SymMatrix& s) {
  return SymMatrix(g * s.dense() * g.transpose());
}

}  // namespace grassinv

#endif  // GRASSINV_MATRIX_HPP
