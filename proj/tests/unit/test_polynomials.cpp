#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace latticeops;
using Q = ExactScalar;
using F = BigScalar;

TEST(Polynomials, TrimsLeadingZeros) {
  Polynomial<Q> p({Q(1), Q(2), Q(0), Q(0)});
  EXPECT_EQ(p.degree(), 1);
  EXPECT_TRUE(Polynomial<Q>({Q(0)}).is_zero());
  EXPECT_EQ(Polynomial<Q>().degree(), -1);
}

TEST(Polynomials, ArithmeticAgreesWithEvaluation) {
  oracle::Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    auto f = oracle::poly<Q>(rng, 5), g = oracle::poly<Q>(rng, 4);
    for (long z = -3; z <= 3; ++z) {
      Q x(z);
      EXPECT_EQ((f + g)(x), f(x) + g(x));
      EXPECT_EQ((f - g)(x), f(x) - g(x));
      EXPECT_EQ((f * g)(x), f(x) * g(x));
    }
    EXPECT_EQ((f * g).degree(), f.degree() + g.degree());
  }
}

TEST(Polynomials, DerivativeOfMonomials) {
  auto p = Polynomial<Q>::monomial(5, Q(3));
  EXPECT_EQ(p.derivative(), Polynomial<Q>::monomial(4, Q(15)));
  EXPECT_TRUE(Polynomial<Q>::constant(Q(7)).derivative().is_zero());
}

TEST(Polynomials, SyntheticDivision) {
  auto p = Polynomial<Q>::linear_factor(Q(2)) * Polynomial<Q>({Q(1), Q(1), Q(1)});
  auto [quot, rem] = p.divide_linear(Q(2));
  EXPECT_TRUE(is_zero(rem));
  EXPECT_EQ(quot, Polynomial<Q>({Q(1), Q(1), Q(1)}));
  EXPECT_EQ(p.divide_linear(Q(1)).second, p(Q(1)));
  EXPECT_THROW(p.exact_divide_linear(Q(1)), InvalidInput);
}

TEST(Interpolation, RecoversRandomPolynomials) {
  oracle::Rng rng(12);
  for (int i = 0; i < 20; ++i) {
    auto f = oracle::poly<Q>(rng, 7);
    std::vector<Q> zs, ws;
    for (long k = 0; k <= f.degree(); ++k) {
      zs.push_back(Q(k * k - 3));
      ws.push_back(f(zs.back()));
    }
    EXPECT_EQ(interpolate(zs, ws), f);
  }
}

TEST(Interpolation, RejectsRepeatedNodes) {
  EXPECT_THROW(interpolate<Q>({Q(1), Q(1)}, {Q(0), Q(1)}), InvalidInput);
  EXPECT_THROW(interpolate<Q>({}, {}), InvalidInput);
}

TEST(Interpolation, BigfloatOnGeometricNodes) {
  PrecisionScope scope(128);
  oracle::Rng rng(13);
  auto f = oracle::poly<F>(rng, 8);
  std::vector<F> zs, ws;
  F z(1);
  for (long k = 0; k <= f.degree(); ++k, z = z * F(3)) {
    zs.push_back(z);
    ws.push_back(f(z));
  }
  EXPECT_TRUE(approx_eq(interpolate(zs, ws), f, 1e-20));
}

TEST(Polynomials, CoefficientwiseComparison) {
  PrecisionScope scope(128);
  Polynomial<F> a({F(1), F(2)}), b({F(1), F(2) + parse_real<F>("1e-30")});
  EXPECT_TRUE(approx_eq(a, b, 1e-25));
  EXPECT_FALSE(approx_eq(a, Polynomial<F>({F(1), F(2), F(1)}), 1e-25));
  EXPECT_DOUBLE_EQ(max_abs_coeff(Polynomial<Q>({Q(-7), Q(3)})), 7.0);
}
