#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <vector>

#include "grassinv/quadrature.hpp"
#include "grassinv/specfun.hpp"

using namespace grassinv;

namespace {

// Selberg: ∫_{[0,1]^m} |V|^{2g} ∏ x^a (1−x)^b dx
//   = ∏_{j<m} Γ(a+1+jg) Γ(b+1+jg) Γ(1+(j+1)g) / (Γ(a+b+2+(m+j−1)g) Γ(1+g)).
// The ordered chamber carries 1/m! of it.
double selberg_chamber(int m, double a, double b) {
  const double g = 0.5;
  double log_v = 0.0;
  for (int j = 0; j < m; ++j)
    log_v += std::lgamma(a + 1 + j * g) + std::lgamma(b + 1 + j * g) + std::lgamma(1 + (j + 1) * g) -
             std::lgamma(a + b + 2 + (m + j - 1) * g) - std::lgamma(1 + g);
  return std::exp(log_v) / factorial(m);
}

const std::vector<double> kHalfGrid{-0.5, 0.0, 0.5};

}  // namespace

TEST(GaussJacobi, SmallRules) {
  const QuadRule one = gauss_jacobi_rule(1, 0.0, 0.0);
  ASSERT_EQ(one.nodes.size(), 1u);
  EXPECT_NEAR(one.nodes[0], 0.5, 1e-15);
  EXPECT_NEAR(one.weights[0], 1.0, 1e-15);

  const QuadRule r = gauss_jacobi_rule(8, 0.0, -0.5);
  double total = 0.0;
  for (double w : r.weights) total += w;
  EXPECT_NEAR(total, 2.0, 1e-13);

  const QuadRule s = gauss_jacobi_rule(1, -0.5, 0.0);
  EXPECT_NEAR(s.integrate([](double x) { return x; }), 2.0 / 3.0, 1e-15);
}

TEST(GaussJacobi, Rejects) {
  EXPECT_THROW(gauss_jacobi_rule(0, 0.0, 0.0), DomainError);
  EXPECT_THROW(gauss_jacobi_rule(4, -1.0, 0.0), DomainError);
  EXPECT_THROW(gauss_jacobi_rule(4, 0.0, -1.5), DomainError);
}

TEST(GaussJacobi, NodesInsideAndWeightsPositive) {
  for (int q : {1, 3, 17, 64, 128}) {
    const QuadRule r = gauss_jacobi_rule(q, 0.5, -0.5);
    EXPECT_EQ(r.degree, 2 * q - 1);
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
      EXPECT_GT(r.nodes[k], 0.0);
      EXPECT_LT(r.nodes[k], 1.0);
      EXPECT_GT(r.weights[k], 0.0);
      if (k) {
        EXPECT_LT(r.nodes[k - 1], r.nodes[k]);
      }
    }
  }
}

TEST(GaussJacobi, MonomialExactnessAgainstBeta) {
  for (double al : kHalfGrid)
    for (double be : kHalfGrid)
      for (int q : {1, 2, 3, 5, 8, 16, 32, 64}) {
        const QuadRule rule = gauss_jacobi_rule(q, al, be);
        for (int p = 0; p <= 2 * q - 1; ++p) {
          const double exact = boost::math::beta(p + al + 1.0, be + 1.0);
          const double got = rule.integrate([p](double x) { return std::pow(x, p); });
          EXPECT_NEAR(got, exact, 1e-12 * exact) << "q=" << q << " p=" << p << " a=" << al << " b=" << be;
        }
      }
}

TEST(GaussJacobi, LargeExponents) {
  const QuadRule rule = gauss_jacobi_rule(20, 7.5, 2.0);
  for (int p = 0; p < 40; ++p) {
    const double exact = boost::math::beta(p + 8.5, 3.0);
    EXPECT_NEAR(rule.integrate([p](double x) { return std::pow(x, p); }), exact, 1e-12 * exact);
  }
}

TEST(GaussLaguerre, MomentExactness) {
  for (double a : {-0.5, 0.0, 1.0, 2.5, 4.0})
    for (int q : {1, 4, 16, 40}) {
      const QuadRule rule = gauss_laguerre_rule(q, a);
      for (int p = 0; p <= std::min(2 * q - 1, 40); ++p) {
        const double exact = std::tgamma(p + a + 1.0);
        EXPECT_NEAR(rule.integrate([p](double x) { return std::pow(x, p); }), exact, 1e-11 * exact)
            << "q=" << q << " p=" << p << " a=" << a;
      }
    }
  EXPECT_THROW(gauss_laguerre_rule(4, -1.0), DomainError);
}

TEST(JacobiWeight, ConventionSwapsExponents) {
  const JacobiWeight w(1, 0.0, -0.5, Convention::AsStated);
  EXPECT_EQ(w.lambda_exponent(), 0.0);
  EXPECT_EQ(w.complement_exponent(), -0.5);
  const JacobiWeight s(1, 0.0, -0.5, Convention::ComplementSwapped);
  EXPECT_EQ(s.lambda_exponent(), -0.5);
  EXPECT_EQ(s.complement_exponent(), 0.0);
  EXPECT_THROW(JacobiWeight(1, -1.0, 0.0), DomainError);
  EXPECT_THROW(JacobiWeight(0, 0.0, 0.0), DomainError);
}

TEST(SimplexIntegrate, OneDimensionalMatchesRule) {
  const JacobiWeight w(1, 0.5, -0.5, Convention::AsStated);
  const QuadRule rule = gauss_jacobi_rule(64, 0.5, -0.5);
  const double direct = rule.integrate([](double x) { return x * x; });
  EXPECT_NEAR(simplex_integrate(parse_f0("poly:0,0,1"), w, 64), direct, 1e-15);
}

TEST(SimplexIntegrate, TwoByTwoExamples) {
  // ∫_{Λ_2}(λ₁−λ₂) dλ = 1/6
  EXPECT_NEAR(simplex_integrate(parse_f0("one"), JacobiWeight(2, 0.0, 0.0), 64), 1.0 / 6.0, 1e-13);
  // α = β = −1/2 over the ordered chamber: 2 (the unordered square gives 4)
  EXPECT_NEAR(simplex_integrate(parse_f0("one"), JacobiWeight(2, -0.5, -0.5), 64), 2.0, 1e-12);
}

TEST(SimplexIntegrate, SelbergOracle) {
  for (int m = 1; m <= 4; ++m)
    for (double a : {-0.5, 0.0, 0.5, 1.0, 2.5})
      for (double b : {-0.5, 0.0, 0.5, 1.5}) {
        const double exact = selberg_chamber(m, a, b);
        const double got = simplex_integrate(parse_f0("one"), JacobiWeight(m, a, b, Convention::AsStated), 32);
        EXPECT_NEAR(got, exact, 1e-10 * exact) << "m=" << m << " a=" << a << " b=" << b;
      }
}

TEST(SimplexIntegrate, ReceivesDescendingArguments) {
  bool ordered = true;
  const SimplexFn probe{"probe", [&ordered](std::span<const double> l) {
                          for (std::size_t j = 1; j < l.size(); ++j) ordered &= l[j - 1] >= l[j];
                          return 1.0;
                        }};
  simplex_integrate(probe, JacobiWeight(3, 0.0, 0.5), 8);
  EXPECT_TRUE(ordered);
}

TEST(SimplexIntegrate, AgreesWithSymmetrizedRoute) {
  // The symmetrized cube rule converges only algebraically (|V| kink).
  for (const char* f : {"one", "sum", "prod", "max"}) {
    const JacobiWeight w(2, 0.5, -0.5);
    const double nested = simplex_integrate(parse_f0(f), w, 48);
    const double sym = simplex_integrate_symmetrized(parse_f0(f), w, 64);
    EXPECT_NEAR(nested, sym, 1e-3 * std::abs(nested)) << f;
  }
}

TEST(SimplexIntegrate, SymmetricTestFunctionsAgreeAcrossOrders) {
  for (const char* f : {"sum", "prod", "poly:1,-2,0.5"}) {
    const JacobiWeight w(3, 0.0, 0.5);
    EXPECT_NEAR(simplex_integrate(parse_f0(f), w, 24), simplex_integrate(parse_f0(f), w, 40), 1e-12) << f;
  }
}

TEST(SimplexIntegrate, RankLimit) {
  EXPECT_THROW(simplex_integrate(parse_f0("one"), JacobiWeight(5, 0.0, 0.0), 4), DomainError);
}

TEST(NormalizationSweep, ChamberConstantGivesUnitMass) {
  for (int n = 2; n <= 8; ++n)
    for (int i = 1; i < n; ++i)
      for (int l = 1; i + l <= n; ++l) {
        const ThmConstants k = theorem2_constants(n, i, l);
        for (Convention c : {Convention::AsStated, Convention::ComplementSwapped}) {
          const double mass = simplex_integrate(parse_f0("one"), JacobiWeight::for_theorem(k, c), 64);
          EXPECT_NEAR(k.normalizer(Normalization::OrderedChamber) * mass, 1.0, 1e-6)
              << n << "," << i << "," << l;
          EXPECT_NEAR(k.normalizer(Normalization::AsPrinted) * mass, 1.0 / factorial(k.m), 1e-6);
        }
      }
}

TEST(SpectralQuadrature, ConventionValuesAtThreeOneOne) {
  // c·∫λ·λ^α(1−λ)^β with c = 1/2, α = 0, β = −1/2
  const ThmConstants k = theorem2_constants(3, 1, 1);
  const SimplexFn lam = parse_f0("sum");
  EXPECT_NEAR(k.c * simplex_integrate(lam, JacobiWeight::for_theorem(k, Convention::AsStated), 64), 2.0 / 3.0, 1e-13);
  EXPECT_NEAR(k.c * simplex_integrate(lam, JacobiWeight::for_theorem(k, Convention::ComplementSwapped), 64),
              1.0 / 3.0, 1e-13);
}
