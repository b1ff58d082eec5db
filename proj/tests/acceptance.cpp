// Acceptance run: one PASS/FAIL line per criterion. Seeds are fixed per
// criterion (seed = criterion number) and never re-rolled.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "grassinv/grassinv.hpp"

using namespace grassinv;

namespace {

constexpr std::size_t kSamples = 100000;

McOptions options(std::uint64_t seed) {
  McOptions o;
  o.seed = seed;
  o.samples = kSamples;
  return o;
}

bool within_3sigma(double got, double want, double se) { return std::abs(got - want) <= std::max(3.0 * se, kAbsoluteFloor); }

struct Criterion {
  bool ok = true;
  std::ostringstream detail;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(int index, const std::string& title, Criterion& c) {
  std::printf("criterion %d: %s  %s%s\n", index, c.ok ? "PASS" : "FAIL", title.c_str(), c.detail.str().c_str());
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

void criterion1() {
  Criterion c;
  struct Case {
    int n, i, l;
    double want;
  };
  for (const Case k : {Case{3, 1, 1, 0.5}, Case{4, 1, 2, 1.0}, Case{4, 2, 2, 0.25}}) {
    const double got = theorem2_constants(k.n, k.i, k.l).c;
    c.detail << " c(" << k.n << k.i << k.l << ")=" << got;
    c.check(std::abs(got - k.want) <= 1e-12 * k.want, "c at (" + std::to_string(k.n) + "," + std::to_string(k.i) +
                                                           "," + std::to_string(k.l) + ")");
  }
  report(1, "theorem constants c", c);
}

void criterion2() {
  Criterion c;
  double worst = 0.0;
  double worst_printed = 0.0;
  int cases = 0;
  for (int n = 2; n <= 8; ++n)
    for (int i = 1; i < n; ++i)
      for (int l = 1; i + l <= n; ++l)
        for (Convention conv : {Convention::AsStated, Convention::ComplementSwapped}) {
          const ThmConstants k = theorem2_constants(n, i, l);
          worst = std::max(worst, std::abs(theorem2_total_mass(n, i, l, conv, Normalization::OrderedChamber) - 1.0));
          worst_printed = std::max(
              worst_printed,
              std::abs(theorem2_total_mass(n, i, l, conv, Normalization::AsPrinted) * factorial(k.m) - 1.0));
          ++cases;
        }
  c.detail << " cases=" << cases << " max|K*int dnu - 1|=" << worst << " (K = m!*c)";
  c.check(worst < 1e-6, "normalization sweep");
  report(2, "normalization sweep, n <= 8, both conventions, q = 64", c);
  std::printf("  note: with the printed c alone the mass is 1/m! (max|m!*c*int dnu - 1| = %.3g)\n", worst_printed);
}

void criterion3() {
  Criterion c;
  struct Case {
    int n, l;
    const char* f0;
    double want;
  };
  for (const Case k : {Case{3, 1, "sum", 1.0 / 3.0}, Case{4, 2, "sum", 0.5}, Case{3, 1, "one", 1.0},
                       Case{4, 2, "one", 1.0}}) {
    const VerifyReport r = verify_theorem1(k.n, k.l, parse_f0(k.f0), options(3));
    c.detail << " (" << k.n << "," << k.l << "," << k.f0 << "): lhs=" << r.lhs << " rhs=" << r.rhs
             << " se=" << r.std_error;
    c.check(r.pass, "lhs vs rhs");
    c.check(within_3sigma(r.lhs, k.want, r.std_error), "lhs vs oracle");
    c.check(std::abs(r.rhs - k.want) < 1e-9, "rhs vs oracle");
  }
  report(3, "bi-spherical formula", c);
}

void criterion4() {
  Criterion c;
  const ThmConstants k = theorem2_constants(3, 1, 1);
  const SimplexFn lam = parse_f0("sum");
  const double rhs_stated = k.normalizer(kDefaultNormalization) *
                            simplex_integrate(lam, JacobiWeight::for_theorem(k, Convention::AsStated), 64);
  const double rhs_swapped = k.normalizer(kDefaultNormalization) *
                             simplex_integrate(lam, JacobiWeight::for_theorem(k, Convention::ComplementSwapped), 64);
  c.detail << " quadrature at (3,1,1): as_stated=" << rhs_stated << " complement_swapped=" << rhs_swapped;
  c.check(std::abs(rhs_stated - 2.0 / 3.0) < 1e-12 && std::abs(rhs_swapped - 1.0 / 3.0) < 1e-12,
          "1D Beta quadrature values");

  const VerifyReport a = verify_theorem2(3, 1, 1, lam, options(4), 64, Convention::AsStated);
  const VerifyReport b = verify_theorem2(3, 1, 1, lam, options(4), 64, Convention::ComplementSwapped);
  c.detail << " lhs=" << b.lhs << " se=" << b.std_error;
  c.check(within_3sigma(b.lhs, 1.0 / 3.0, b.std_error), "lhs = 1/3");
  c.check(a.pass != b.pass, "exactly one convention matches");
  const Convention selected = b.pass ? Convention::ComplementSwapped : Convention::AsStated;
  c.detail << " selected=" << to_string(selected);
  c.check(selected == kDefaultConvention, "selected convention is the default");

  const VerifyReport r = verify_theorem2(5, 2, 2, lam, options(4), 64, selected);
  c.detail << " (5,2,2): lhs=" << r.lhs << " rhs=" << r.rhs << " se=" << r.std_error;
  c.check(within_3sigma(r.lhs, 0.8, r.std_error), "lhs = 0.8");
  c.check(r.pass, "rhs matches under selected convention");
  report(4, "Grassmannian spectral reduction", c);
}

void criterion5() {
  Criterion c;
  const DensityReport a = density_report(3, 1, 1, 50, options(5));
  const DensityReport b = density_report(4, 1, 2, 50, options(5));
  c.detail << " (3,1,1) ks[" << to_string(kDefaultConvention) << "]=" << a.ks(kDefaultConvention)
           << " ks[other]=" << a.ks(kDefaultConvention == Convention::AsStated ? Convention::ComplementSwapped
                                                                            : Convention::AsStated)
           << " (4,1,2) ks=" << b.ks(kDefaultConvention);
  c.check(a.ks(kDefaultConvention) < 0.01, "(3,1,1) KS");
  c.check(b.ks(kDefaultConvention) < 0.01, "(4,1,2) KS");
  report(5, "canonical-angle density", c);
}

void criterion6() {
  Criterion c;
  struct Case {
    int n, m, k;
    const char* fv;
    double oracle;  // NaN: two-path agreement only
  };
  const double none = std::nan("");
  for (const Case k : {Case{5, 2, 2, "topgram", 1.2}, Case{5, 2, 2, "v11sq", none}, Case{4, 1, 2, "topgram", none},
                       Case{4, 1, 2, "v11sq", 0.25}}) {
    const VerifyReport r = verify_bistiefel(k.n, k.m, k.k, parse_stiefel_fn(k.fv, k.n, k.k), options(6));
    c.detail << " (" << k.n << k.m << k.k << "," << k.fv << "): " << r.lhs << " vs " << r.rhs << " se=" << r.std_error;
    c.check(r.pass, "two paths agree");
    if (!std::isnan(k.oracle)) {
      c.check(within_3sigma(r.lhs, k.oracle, r.extra("lhs_stderr")), "haar path vs oracle");
      c.check(within_3sigma(r.rhs, k.oracle, r.extra("rhs_stderr")), "beta path vs oracle");
    }
  }
  report(6, "bi-Stiefel decomposition, two-path Monte Carlo", c);
}

void criterion7() {
  Criterion c;
  const std::size_t n = 5, m = 2;
  const PolarMoments pm = polar_pushforward_moments(n, m, options(7));
  int bad = 0, total = 0;
  double worst_z = 0.0;
  auto entry = [&](double got, double want, double se) {
    ++total;
    worst_z = std::max(worst_z, se > 0 ? std::abs(got - want) / se : 0.0);
    if (!within_3sigma(got, want, se)) ++bad;
  };
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) entry(pm.mean_r(a, b), a == b ? double(n) : 0.0, pm.stderr_r(a, b));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) entry(pm.mean_vv(a, b), a == b ? double(m) / n : 0.0, pm.stderr_vv(a, b));
  c.detail << " entries=" << total << " outside 3 sigma=" << bad << " max|z|=" << worst_z
           << " E[r]=(" << pm.mean_r(0, 0) << "," << pm.mean_r(1, 1) << ")";
  c.check(bad == 0, "entrywise 3 sigma");
  report(7, "polar pushforward moments", c);
}

void criterion8() {
  Criterion c;
  const VerifyReport s = verify_zhang(1, 2.0, 3.0, options(8));
  c.detail << " m=1: " << s.lhs << " vs " << s.rhs;
  c.check(std::abs(s.lhs - 2.0) < 1e-8 && std::abs(s.rhs - 2.0) < 1e-8, "m=1 deterministic");
  const VerifyReport r = verify_zhang(2, 2.0, 2.0, options(8));
  const double exact = r.extra("exact");
  c.detail << " m=2: lhs=" << r.lhs << " rhs=" << r.rhs << " se=" << r.std_error << " exact=" << exact;
  c.check(std::abs(exact - std::numbers::pi * std::numbers::pi / 4.0) < 1e-12, "Gamma_2(2)^2");
  c.check(r.pass, "MC sides agree");
  c.check(within_3sigma(r.lhs, exact, r.extra("lhs_stderr")), "lhs vs exact");
  c.check(within_3sigma(r.rhs, exact, r.extra("rhs_stderr")), "rhs vs exact");
  report(8, "matrix Beta-Gamma change of variables", c);
}

void criterion9() {
  Criterion c;
  Rng rng(9, 0);
  double frame_defect = 0.0, idem = 0.0, trace_err = 0.0, roundtrip = 0.0, kell = 0.0, gj = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 2 + rng.next_u64() % 7;
    const std::size_t m = 1 + rng.next_u64() % (n - 1);
    frame_defect = std::max(frame_defect, orthonormality_defect(haar_stiefel(n, m, rng).matrix()));
    const Subspace xi = haar_grassmann(n, m, rng);
    const DenseMatrix& p = xi.projection().dense();
    idem = std::max(idem, (p * p - p).max_abs());
    trace_err = std::max(trace_err, std::abs(p.trace() - double(m)));
  }
  for (int t = 0; t < 10000; ++t) {
    const Frame v = haar_stiefel(6, 2, rng);
    const BiStiefelCoords bc = bistiefel_decompose(v, 3);
    roundtrip = std::max(roundtrip, (bistiefel_compose(bc.u1, bc.u2, bc.r).matrix() - v.matrix()).max_abs());
  }
  for (int t = 0; t < 1000; ++t) {
    const Subspace xi = haar_grassmann(7, 3, rng);
    const SpectralPoint a = spectral_coords(xi, 2);
    const SpectralPoint b = spectral_coords(k_ell_action(random_k_ell(7, 2, rng), xi), 2);
    for (std::size_t j = 0; j < a.m(); ++j) kell = std::max(kell, std::abs(a[j] - b[j]));
  }
  for (double al : {-0.5, 0.0, 0.5})
    for (double be : {-0.5, 0.0, 0.5})
      for (int q : {1, 2, 4, 8, 16, 32, 64}) {
        const QuadRule rule = gauss_jacobi_rule(q, al, be);
        for (int p = 0; p <= 2 * q - 1; ++p) {
          const double exact = boost::math::beta(p + al + 1.0, be + 1.0);
          const double got = rule.integrate([p](double x) { return std::pow(x, p); });
          gj = std::max(gj, std::abs(got - exact) / exact);
        }
      }
  c.detail << " frame=" << frame_defect << " idem=" << idem << " trace=" << trace_err << " roundtrip=" << roundtrip
           << " K_l=" << kell << " gauss-jacobi rel=" << gj;
  c.check(frame_defect < 1e-10, "frames");
  c.check(idem < 1e-9 && trace_err < 1e-9, "subspaces");
  c.check(roundtrip < 1e-9, "bi-Stiefel round trip");
  c.check(kell < 1e-9, "K_l invariance");
  c.check(gj < 1e-12, "Gauss-Jacobi exactness");
  report(9, "structural properties", c);
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> all{criterion1, criterion2, criterion3, criterion4, criterion5,
                                               criterion6, criterion7, criterion8, criterion9};
  for (const auto& run : all) {
    try {
      run();
    } catch (const std::exception& e) {
      std::printf("criterion: FAIL  unexpected exception: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
