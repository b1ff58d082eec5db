#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <vector>

#include "grassinv/mc.hpp"
#include "grassinv/rng.hpp"
#include "grassinv/sampler.hpp"
#include "grassinv/verify.hpp"

using namespace grassinv;

TEST(Rng, ReproducibleAndStreamsDiffer) {
  Rng a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  bool differs_c = false, differs_d = false;
  for (int k = 0; k < 100; ++k) {
    const std::uint64_t x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs_c |= x != c.next_u64();
    differs_d |= x != d.next_u64();
  }
  EXPECT_TRUE(differs_c);
  EXPECT_TRUE(differs_d);
}

TEST(Rng, NormalAndGammaMoments) {
  Rng rng(1, 0);
  Accumulator n, g, u;
  for (int k = 0; k < 200000; ++k) {
    n.add(rng.normal());
    g.add(rng.gamma(2.5));
    u.add(rng.uniform());
  }
  EXPECT_NEAR(n.mean, 0.0, 4.0 * n.std_error());
  EXPECT_NEAR(n.variance(), 1.0, 0.02);
  EXPECT_NEAR(g.mean, 2.5, 4.0 * g.std_error());
  EXPECT_NEAR(g.variance(), 2.5, 0.08);
  EXPECT_NEAR(u.mean, 0.5, 4.0 * u.std_error());
}

TEST(Rng, GammaSmallShape) {
  Rng rng(2, 0);
  Accumulator g;
  for (int k = 0; k < 200000; ++k) g.add(rng.gamma(0.3));
  EXPECT_NEAR(g.mean, 0.3, 4.0 * g.std_error());
}

TEST(Frame, RejectsNonOrthonormal) {
  EXPECT_THROW(Frame(DenseMatrix{{1, 0}, {0, 2}}), DomainError);
  EXPECT_THROW(Frame(DenseMatrix{{1, 0, 0}, {0, 1, 0}}), DimensionMismatch);
  EXPECT_NO_THROW(Frame(DenseMatrix{{0, 1}, {1, 0}, {0, 0}}));
}

TEST(Subspace, FromProjection) {
  EXPECT_THROW(Subspace(SymMatrix{{1, 0}, {0, 0.5}}), DomainError);
  EXPECT_THROW(Subspace(SymMatrix{{1, 0}, {0, 1}}), DomainError);  // trace n is not in [1, n-1]
  const Subspace s(SymMatrix{{0.5, 0.5}, {0.5, 0.5}});
  EXPECT_EQ(s.i(), 1u);
  const Frame b = s.basis();
  EXPECT_NEAR(std::abs(b(0, 0)), std::sqrt(0.5), 1e-14);
}

TEST(Haar, FramesAndSubspacesAreValid) {
  Rng rng(3, 0);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + rng.next_u64() % 7;
    const std::size_t m = 1 + rng.next_u64() % (n - 1);
    const Frame v = haar_stiefel(n, m, rng);
    EXPECT_LT(orthonormality_defect(v.matrix()), 1e-10);
    const Subspace xi = haar_grassmann(n, m, rng);
    const DenseMatrix& p = xi.projection().dense();
    EXPECT_LT((p * p - p).max_abs(), 1e-9);
    EXPECT_NEAR(p.trace(), double(m), 1e-9);
  }
}

TEST(Haar, SphereCoordinateMoments) {
  // θ uniform on S^{n−1}: E θ₁² = 1/n, E θ₁⁴ = 3/(n(n+2)).
  Rng rng(4, 0);
  const std::size_t n = 4;
  Accumulator a2, a4;
  for (int t = 0; t < 100000; ++t) {
    const double x = haar_stiefel(n, 1, rng)(0, 0);
    a2.add(x * x);
    a4.add(x * x * x * x);
  }
  EXPECT_NEAR(a2.mean, 0.25, 3.5 * a2.std_error());
  EXPECT_NEAR(a4.mean, 3.0 / 24.0, 3.5 * a4.std_error());
}

TEST(Polar, ReconstructsInput) {
  Rng rng(5, 0);
  for (int t = 0; t < 100; ++t) {
    const DenseMatrix x = gaussian_matrix(5, 2, rng);
    const PolarResult p = polar_decompose(x);
    const DenseMatrix back = p.v.matrix() * psd_sqrt(p.r).dense();
    EXPECT_LT((back - x).max_abs(), 1e-12);
  }
  EXPECT_THROW(polar_decompose(DenseMatrix{{1, 2}, {2, 4}, {3, 6}}), RankDeficient);
}

TEST(Bispherical, ComposesUnitVector) {
  const std::vector<double> u{0.6, 0.8};
  const std::vector<double> w{1.0};
  const std::vector<double> th = bispherical_compose(u, w, std::acos(0.5));
  EXPECT_NEAR(euclidean_norm(th), 1.0, 1e-15);
  EXPECT_NEAR(th[2], 0.5, 1e-15);  // cos ω along ℝ^ℓ
  EXPECT_THROW(bispherical_compose(u, w, 2.0), DomainError);
  EXPECT_THROW(bispherical_compose(std::vector<double>{1.0, 1.0}, w, 0.3), DomainError);
}

TEST(BiStiefel, RoundTrip) {
  Rng rng(6, 0);
  for (int t = 0; t < 1000; ++t) {
    const Frame v = haar_stiefel(5, 2, rng);
    const BiStiefelCoords c = bistiefel_decompose(v, 2);
    const Frame back = bistiefel_compose(c.u1, c.u2, c.r);
    EXPECT_LT((back.matrix() - v.matrix()).max_abs(), 1e-9);
  }
}

TEST(BiStiefel, Guards) {
  Rng rng(7, 0);
  const Frame u1 = haar_stiefel(3, 2, rng);
  const Frame u2 = haar_stiefel(2, 2, rng);
  EXPECT_THROW(bistiefel_compose(u1, u2, SymMatrix{{1.5, 0}, {0, 0.2}}), SpectrumOutOfRange);
  EXPECT_THROW(bistiefel_decompose(haar_stiefel(5, 3, rng), 2), DomainError);
}

TEST(MatrixBeta, TraceMoment) {
  // E trace r = m ν₁/(ν₁+ν₂)
  McOptions o;
  o.seed = 8;
  o.samples = 50000;
  const McEstimate e = run_mc(o, [](Rng& rng) { return sample_matrix_beta(3, 2, 2, rng).trace(); });
  EXPECT_NEAR(e.mean, 1.2, 3.5 * e.std_error);
}

TEST(MatrixBeta, ScalarCaseMatchesBetaCdf) {
  // m = 1: r ~ Beta(ν₁/2, ν₂/2)
  Rng rng(9, 0);
  std::vector<double> xs;
  for (int t = 0; t < 100000; ++t) xs.push_back(sample_matrix_beta(3, 2, 1, rng)(0, 0));
  const double ks = ks_distance(xs, [](double x) { return boost::math::ibeta(1.5, 1.0, x); });
  EXPECT_LT(ks, 0.01);
}

TEST(MatrixBeta, MatchesTopBlockGramOfHaarFrame) {
  // Gram of the top ν₁ rows of a Haar frame in V_{ν₁+ν₂, m}
  McOptions o;
  o.seed = 10;
  o.samples = 50000;
  auto moments = [](const SymMatrix& r, std::span<double> out) {
    out[0] = r.trace();
    out[1] = (r.dense() * r.dense()).trace();
  };
  const McVectorEstimate a =
      run_mc_vector(o, 2, [&](Rng& rng, std::span<double> out) { moments(sample_matrix_beta(3, 2, 2, rng), out); });
  o.stream_base = 100;
  const McVectorEstimate b = run_mc_vector(o, 2, [&](Rng& rng, std::span<double> out) {
    moments(SymMatrix::gram(haar_stiefel(5, 2, rng).matrix().rows_range(0, 3)), out);
  });
  for (int j = 0; j < 2; ++j) {
    const double se = std::hypot(a.components[j].std_error(), b.components[j].std_error());
    EXPECT_NEAR(a.components[j].mean, b.components[j].mean, 3.5 * se);
  }
}

TEST(Wishart, MeanIsDofTimesIdentity) {
  McOptions o;
  o.seed = 11;
  o.samples = 50000;
  const McVectorEstimate e = run_mc_vector(o, 3, [](Rng& rng, std::span<double> out) {
    const SymMatrix w = sample_wishart(3.5, 2, rng);
    out[0] = w(0, 0);
    out[1] = w(1, 1);
    out[2] = w(0, 1);
  });
  EXPECT_NEAR(e.components[0].mean, 3.5, 3.5 * e.components[0].std_error());
  EXPECT_NEAR(e.components[1].mean, 3.5, 3.5 * e.components[1].std_error());
  EXPECT_NEAR(e.components[2].mean, 0.0, 3.5 * e.components[2].std_error());
  Rng rng(0, 0);
  EXPECT_THROW(sample_wishart(0.9, 2, rng), DomainError);
}
