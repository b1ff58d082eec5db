#ifndef GRASSINV_VERIFY_HPP
#define GRASSINV_VERIFY_HPP

// Verification drivers: each integral identity is evaluated from two
// independent sides (Monte Carlo over Haar measure against deterministic
// quadrature, or two Monte Carlo paths) and compared at 3 standard errors.

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grassinv/errors.hpp"
#include "grassinv/invariants.hpp"
#include "grassinv/matrix.hpp"
#include "grassinv/mc.hpp"
#include "grassinv/quadrature.hpp"
#include "grassinv/report.hpp"
#include "grassinv/rng.hpp"
#include "grassinv/sampler.hpp"
#include "grassinv/specfun.hpp"

namespace grassinv {

inline constexpr int kDefaultQuadOrder = 64;

/// Mean and standard error of f over Haar-distributed ξ ∈ G_{n,i}.
inline McEstimate mc_integrate_grassmann(const InvariantFn& f, std::size_t n, std::size_t i, const McOptions& opts) {
  if (opts.samples < 2) throw DomainError("mc_integrate_grassmann needs N >= 2");
  return run_mc(opts, [&f, n, i](Rng& rng) { return f(haar_grassmann(n, i, rng)); });
}

namespace detail {

inline VerifyReport start_report(std::string identity, const McOptions& opts) {
  VerifyReport r;
  r.identity = std::move(identity);
  r.seed = opts.seed;
  r.samples = opts.samples;
  return r;
}

inline double combined_error(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace detail

/// Bi-spherical formula on S^{n−1}: the mean of f0(θᵗ Pr_{ℝ^ℓ} θ) over
/// uniform θ equals (c / 2σ_{n−1}) ∫₀¹ f0(s) s^{ℓ/2−1}(1−s)^{(n−ℓ)/2−1} ds
/// with c = σ_{ℓ−1} σ_{n−ℓ−1}.
inline VerifyReport verify_theorem1(int n, int ell, const SimplexFn& f0, const McOptions& opts,
                                    int q = kDefaultQuadOrder) {
  if (n < 2 || ell < 1 || ell > n - 1) throw HypothesisViolated("theorem1 needs 1 <= l <= n-1");
  const std::size_t un = static_cast<std::size_t>(n);
  const std::size_t ul = static_cast<std::size_t>(ell);
  const McEstimate lhs = run_mc(opts, [&f0, un, ul](Rng& rng) {
    const Frame theta = haar_stiefel(un, 1, rng);
    double s = 0.0;
    for (std::size_t r = un - ul; r < un; ++r) s += theta(r, 0) * theta(r, 0);
    const double arg[1] = {s};
    return f0(arg);
  });

  const double c = theorem1_constant(n, ell);
  const QuadRule rule = gauss_jacobi_rule(q, 0.5 * ell - 1.0, 0.5 * (n - ell) - 1.0);
  const double integral = rule.integrate([&f0](double s) {
    const double arg[1] = {s};
    return f0(arg);
  });

  VerifyReport r = detail::start_report("theorem1", opts);
  r.params = {{"n", double(n)}, {"l", double(ell)}};
  r.lhs = lhs.mean;
  r.rhs = c / (2.0 * sphere_area(n)) * integral;
  r.std_error = lhs.std_error;
  r.redraws = lhs.redraws;
  r.quad_order = q;
  r.extras = {{"c", c}, {"sphere_area", sphere_area(n)}, {"integral", integral}};
  apply_three_sigma_rule(r);
  return r;
}

/// Grassmannian reduction: ∫_{G_{n,i}} f dξ against K·∫_{Λ_m} f0 dν, where
/// f = f0 ∘ spectral_coords and K is the constant selected by `norm`.
inline VerifyReport verify_theorem2(int n, int i, int ell, const SimplexFn& f0, const McOptions& opts,
                                    int q = kDefaultQuadOrder, Convention conv = kDefaultConvention,
                                    Normalization norm = kDefaultNormalization) {
  const ThmConstants k = theorem2_constants(n, i, ell);
  detail::check_rank(k.m);
  const InvariantFn f = lift(f0, n, i, ell);
  const McEstimate lhs = mc_integrate_grassmann(f, n, i, opts);
  const double integral = simplex_integrate(f0, JacobiWeight::for_theorem(k, conv), q);

  VerifyReport r = detail::start_report("theorem2", opts);
  r.params = {{"n", double(n)}, {"i", double(i)}, {"l", double(ell)}, {"m", double(k.m)}};
  r.lhs = lhs.mean;
  r.rhs = k.normalizer(norm) * integral;
  r.std_error = lhs.std_error;
  r.redraws = lhs.redraws;
  r.quad_order = q;
  r.convention = to_string(conv);
  r.normalization = to_string(norm);
  r.extras = {{"alpha", k.alpha.value()}, {"beta", k.beta.value()}, {"c", k.c},
              {"c_m", k.c_m},           {"normalizer", k.normalizer(norm)}, {"simplex_integral", integral}};
  apply_three_sigma_rule(r);
  return r;
}

/// c·∫_{Λ_m} dν for the constant selected by `norm` (1 under OrderedChamber).
inline double theorem2_total_mass(int n, int i, int ell, Convention conv, Normalization norm,
                                  int q = kDefaultQuadOrder) {
  const ThmConstants k = theorem2_constants(n, i, ell);
  const SimplexFn one = parse_f0("one");
  return k.normalizer(norm) * simplex_integrate(one, JacobiWeight::for_theorem(k, conv), q);
}

/// A real function on V_{n,m}.
struct StiefelFn {
  std::string name;
  std::function<double(const Frame&)> eval;
  double operator()(const Frame& v) const { return eval(v); }
};

/// Registry: "one"; "topgram" = trace of the Gram matrix of the top
/// (n−k)-row block; "v11sq" = (v₁₁)².
inline StiefelFn parse_stiefel_fn(std::string_view name, std::size_t n, std::size_t k) {
  if (name == "one") return {"one", [](const Frame&) { return 1.0; }};
  if (name == "topgram")
    return {"topgram", [n, k](const Frame& v) {
              double s = 0.0;
              for (std::size_t r = 0; r + k < n; ++r)
                for (std::size_t c = 0; c < v.m(); ++c) s += v(r, c) * v(r, c);
              return s;
            }};
  if (name == "v11sq") return {"v11sq", [](const Frame& v) { return v(0, 0) * v(0, 0); }};
  throw DomainError("unknown Stiefel function '" + std::string(name) + "' (expected one|topgram|v11sq)");
}

/// Bi-Stiefel decomposition, two Monte Carlo paths: f over Haar V_{n,m}
/// versus f([u₁ r^{1/2}; u₂ (I−r)^{1/2}]) with Haar u₁, u₂ and r drawn as a
/// Wishart ratio (matrix Beta with n−k and k degrees of freedom).
inline VerifyReport verify_bistiefel(int n, int m, int k, const StiefelFn& f, const McOptions& opts) {
  if (n < 2 || m < 1 || k < 1 || k > n - 1 || m > std::min(k, n - k))
    throw DomainError("bistiefel needs m <= min(k, n-k)");
  const std::size_t un = n, um = m, uk = k;
  const McEstimate lhs = run_mc(opts, [&f, un, um](Rng& rng) { return f(haar_stiefel(un, um, rng)); });

  McOptions rhs_opts = opts;
  rhs_opts.stream_base = opts.stream_base + (std::uint64_t{1} << 32);
  const McEstimate rhs = run_mc(rhs_opts, [&f, un, um, uk](Rng& rng) {
    const Frame u1 = haar_stiefel(un - uk, um, rng);
    const Frame u2 = haar_stiefel(uk, um, rng);
    const SymMatrix r = sample_matrix_beta(un - uk, uk, um, rng);
    return f(bistiefel_compose(u1, u2, r));
  });

  VerifyReport r = detail::start_report("bistiefel", opts);
  r.params = {{"n", double(n)}, {"m", double(m)}, {"k", double(k)}};
  r.lhs = lhs.mean;
  r.rhs = rhs.mean;
  r.std_error = detail::combined_error(lhs.std_error, rhs.std_error);
  r.redraws = lhs.redraws + rhs.redraws;
  r.extras = {{"lhs_stderr", lhs.std_error}, {"rhs_stderr", rhs.std_error}};
  apply_three_sigma_rule(r);
  return r;
}

/// F(p₁, p₂) = det(p₁)^a det(p₂)^b exp(−tr p₁ − tr p₂), in log form.
struct ZhangIntegrand {
  double a = 0.0;
  double b = 0.0;

  double log_value(const SymMatrix& p1, const SymMatrix& p2) const {
    return a * std::log(det(p1)) + b * std::log(det(p2)) - p1.trace() - p2.trace();
  }
};

namespace detail {

// Wishart_m(ν, I) density with respect to d_*p = |p|^{−(m+1)/2} dp, in logs.
inline double log_wishart_star_density(const SymMatrix& p, double nu) {
  const int m = static_cast<int>(p.dim());
  return 0.5 * nu * std::log(det(p)) - 0.5 * p.trace() - 0.5 * nu * m * std::log(2.0) -
         log_siegel_gamma(m, 0.5 * nu);
}

// Matrix Beta(ν₁/2, ν₂/2) density with respect to dr, in logs.
inline double log_matrix_beta_density(const SymMatrix& r, double nu1, double nu2) {
  const int m = static_cast<int>(r.dim());
  const double d = 0.5 * (m + 1);
  const SymMatrix complement(DenseMatrix::identity(m) - r.dense());
  return (0.5 * nu1 - d) * std::log(det(r)) + (0.5 * nu2 - d) * std::log(det(complement)) +
         log_siegel_gamma(m, 0.5 * (nu1 + nu2)) - log_siegel_gamma(m, 0.5 * nu1) - log_siegel_gamma(m, 0.5 * nu2);
}

}  // namespace detail

/// Change of variables on 𝒫_m × 𝒫_m: ∫∫ F(p₁,p₂) d_*p₁ d_*p₂ against
/// ∫_0^{I} |I−r|^{−d} d_*r ∫ F(s^{1/2} r s^{1/2}, s^{1/2}(I−r) s^{1/2}) d_*s.
/// m = 1 is evaluated by tensor Gauss rules; m ≥ 2 by Wishart importance
/// sampling on both sides. The exact value is Γ_m(a)·Γ_m(b).
inline VerifyReport verify_zhang(int m, double a, double b, const McOptions& opts, int q = kDefaultQuadOrder) {
  if (m < 1) throw DomainError("zhang needs m >= 1");
  const double half_m1 = 0.5 * (m - 1);
  if (!(a > half_m1) || !(b > half_m1)) throw DomainError("zhang needs a, b > (m-1)/2");
  const ZhangIntegrand F{a, b};
  const double d = 0.5 * (m + 1);
  const double exact = std::exp(log_siegel_gamma(m, a) + log_siegel_gamma(m, b));

  VerifyReport r = detail::start_report("zhang", opts);
  r.params = {{"m", double(m)}, {"a", a}, {"b", b}};

  if (m == 1) {
    auto one_by_one = [](double x) { return SymMatrix(DenseMatrix(1, 1, {x})); };
    // LHS: ∫∫ F dp₁/p₁ dp₂/p₂ with weights x^{a−1}e^{−x}, y^{b−1}e^{−y}.
    const QuadRule la = gauss_laguerre_rule(q, a - 1.0);
    const QuadRule lb = gauss_laguerre_rule(q, b - 1.0);
    double lhs = 0.0;
    for (std::size_t j = 0; j < la.nodes.size(); ++j)
      for (std::size_t k = 0; k < lb.nodes.size(); ++k) {
        const double x = la.nodes[j];
        const double y = lb.nodes[k];
        const double log_f = F.log_value(one_by_one(x), one_by_one(y));
        const double log_w = a * std::log(x) - x + b * std::log(y) - y;
        lhs += la.weights[j] * lb.weights[k] * std::exp(log_f - log_w);
      }
    // RHS: ∫₀¹ dr/(r(1−r)) ∫ ds/s F(s r, s(1−r)), weights r^{a−1}(1−r)^{b−1}, s^{a+b−1}e^{−s}.
    const QuadRule jr = gauss_jacobi_rule(q, a - 1.0, b - 1.0);
    const QuadRule ls = gauss_laguerre_rule(q, a + b - 1.0);
    double rhs = 0.0;
    for (std::size_t j = 0; j < jr.nodes.size(); ++j)
      for (std::size_t k = 0; k < ls.nodes.size(); ++k) {
        const double rr = jr.nodes[j];
        const double s = ls.nodes[k];
        const double log_f = F.log_value(one_by_one(s * rr), one_by_one(s * (1.0 - rr)));
        const double log_w = a * std::log(rr) + b * std::log(1.0 - rr) + (a + b) * std::log(s) - s;
        rhs += jr.weights[j] * ls.weights[k] * std::exp(log_f - log_w);
      }
    r.lhs = lhs;
    r.rhs = rhs;
    r.std_error = 0.0;
    r.samples = 0;
    r.quad_order = q;
    r.extras = {{"exact", exact}};
    apply_three_sigma_rule(r);
    return r;
  }

  const std::size_t um = m;
  const McEstimate lhs = run_mc(opts, [F, a, b, um](Rng& rng) {
    const SymMatrix p1 = sample_wishart(2.0 * a, um, rng);
    const SymMatrix p2 = sample_wishart(2.0 * b, um, rng);
    return std::exp(F.log_value(p1, p2) - detail::log_wishart_star_density(p1, 2.0 * a) -
                    detail::log_wishart_star_density(p2, 2.0 * b));
  });

  McOptions rhs_opts = opts;
  rhs_opts.stream_base = opts.stream_base + (std::uint64_t{1} << 32);
  const McEstimate rhs = run_mc(rhs_opts, [F, a, b, d, um](Rng& rng) {
    const SymMatrix rr = sample_matrix_beta_real(2.0 * a, 2.0 * b, um, rng);
    const SymMatrix s = sample_wishart(2.0 * (a + b), um, rng);
    const DenseMatrix s_half = psd_sqrt(s).dense();
    const SymMatrix complement(DenseMatrix::identity(um) - rr.dense());
    const SymMatrix p1 = congruence(s_half, rr);
    const SymMatrix p2 = congruence(s_half, complement);
    // measure |I−r|^{−d} d_*r = |I−r|^{−d} |r|^{−d} dr
    const double log_measure = -d * std::log(det(complement)) - d * std::log(det(rr));
    return std::exp(F.log_value(p1, p2) + log_measure - detail::log_matrix_beta_density(rr, 2.0 * a, 2.0 * b) -
                    detail::log_wishart_star_density(s, 2.0 * (a + b)));
  });

  r.lhs = lhs.mean;
  r.rhs = rhs.mean;
  r.std_error = detail::combined_error(lhs.std_error, rhs.std_error);
  r.redraws = lhs.redraws + rhs.redraws;
  r.extras = {{"exact", exact}, {"lhs_stderr", lhs.std_error}, {"rhs_stderr", rhs.std_error}};
  apply_three_sigma_rule(r);
  return r;
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf&& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const double f = cdf(sample[k]);
    d = std::max({d, f - k / n, (k + 1) / n - f});
  }
  return d;
}

/// CDF of the normalized density ∝ λ^a (1 − λ)^b on [0,1].
inline double jacobi_cdf(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a + 1.0, b + 1.0, x);
}

struct DensityReport {
  int n = 0, i = 0, ell = 0, m = 0;
  int bins = 0;
  std::size_t samples = 0;
  std::size_t redraws = 0;
  std::uint64_t seed = 0;
  /// counts[bin][j]: samples of λ_j in [bin/bins, (bin+1)/bins).
  std::vector<std::vector<std::size_t>> counts;
  /// m = 1 only: KS distance under each convention (NaN otherwise).
  double ks_as_stated = std::nan("");
  double ks_swapped = std::nan("");
  /// m = 1 only: expected counts per bin under each convention.
  std::vector<double> expected_as_stated;
  std::vector<double> expected_swapped;

  double ks(Convention c) const { return c == Convention::AsStated ? ks_as_stated : ks_swapped; }
};

/// Empirical law of spectral_coords over N Haar subspaces.
inline DensityReport density_report(int n, int i, int ell, int bins, const McOptions& opts) {
  check_grassmann_indices(n, i, ell);
  if (bins < 1) throw DomainError("bins must be >= 1");
  const int m = std::min(i, ell);
  const std::size_t un = n, ui = i, ul = ell, um = m;

  // The MC driver only keeps moments, so the raw λ are collected per
  // worker through the output slots of a vector run with one slot per λ_j
  // and a side buffer keyed by worker stream.
  std::vector<std::vector<double>> per_worker(std::max(1u, opts.threads));
  const McVectorEstimate est = run_mc_vector(opts, um, [&per_worker, &opts, un, ui, ul, um](Rng& rng, std::span<double> out) {
    const SpectralPoint lam = spectral_coords(haar_grassmann(un, ui, rng), ul);
    auto& buf = per_worker[rng.stream() - opts.stream_base - 1];
    for (std::size_t j = 0; j < um; ++j) {
      out[j] = lam[j];
      buf.push_back(lam[j]);
    }
  });

  DensityReport rep;
  rep.n = n;
  rep.i = i;
  rep.ell = ell;
  rep.m = m;
  rep.bins = bins;
  rep.samples = opts.samples;
  rep.redraws = est.redraws;
  rep.seed = opts.seed;
  rep.counts.assign(bins, std::vector<std::size_t>(um, 0));
  std::vector<double> first;
  first.reserve(opts.samples);
  for (const auto& buf : per_worker) {
    for (std::size_t s = 0; s + um <= buf.size(); s += um) {
      for (std::size_t j = 0; j < um; ++j) {
        const double x = buf[s + j];
        const int bin = std::min(bins - 1, static_cast<int>(x * bins));
        ++rep.counts[bin][j];
      }
      if (m == 1) first.push_back(buf[s]);
    }
  }

  if (m == 1) {
    const ThmConstants k = theorem2_constants(n, i, ell);
    const double al = k.alpha.value();
    const double be = k.beta.value();
    rep.ks_as_stated = ks_distance(first, [al, be](double x) { return jacobi_cdf(x, al, be); });
    rep.ks_swapped = ks_distance(first, [al, be](double x) { return jacobi_cdf(x, be, al); });
    rep.expected_as_stated.resize(bins);
    rep.expected_swapped.resize(bins);
    const double total = static_cast<double>(opts.samples);
    for (int bin = 0; bin < bins; ++bin) {
      const double lo = double(bin) / bins;
      const double hi = double(bin + 1) / bins;
      rep.expected_as_stated[bin] = total * (jacobi_cdf(hi, al, be) - jacobi_cdf(lo, al, be));
      rep.expected_swapped[bin] = total * (jacobi_cdf(hi, be, al) - jacobi_cdf(lo, be, al));
    }
  }
  return rep;
}

struct PolarMoments {
  DenseMatrix mean_r, stderr_r;    ///< m×m
  DenseMatrix mean_vv, stderr_vv;  ///< n×n
  std::size_t redraws = 0;
};

/// Moments of the polar coordinates (v, r) of an iid standard Gaussian n×m
/// matrix: E[r] = n·I_m and E[v vᵗ] = (m/n)·I_n.
inline PolarMoments polar_pushforward_moments(std::size_t n, std::size_t m, const McOptions& opts) {
  if (m < 1 || m > n) throw DomainError("polar moments need 1 <= m <= n");
  const McVectorEstimate est = run_mc_vector(opts, m * m + n * n, [n, m](Rng& rng, std::span<double> out) {
    const PolarResult p = polar_decompose(gaussian_matrix(n, m, rng));
    const DenseMatrix vv = p.v.matrix() * p.v.matrix().transpose();
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) out[a * m + b] = p.r(a, b);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) out[m * m + a * n + b] = vv(a, b);
  });
  PolarMoments pm{DenseMatrix(m, m), DenseMatrix(m, m), DenseMatrix(n, n), DenseMatrix(n, n), est.redraws};
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      pm.mean_r(a, b) = est.components[a * m + b].mean;
      pm.stderr_r(a, b) = est.components[a * m + b].std_error();
    }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      pm.mean_vv(a, b) = est.components[m * m + a * n + b].mean;
      pm.stderr_vv(a, b) = est.components[m * m + a * n + b].std_error();
    }
  return pm;
}

}  // namespace grassinv

#endif  // GRASSINV_VERIFY_HPP
