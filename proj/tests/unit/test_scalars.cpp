#include <gtest/gtest.h>

#include "latticeops/scalar.hpp"

using namespace latticeops;
using Q = ExactScalar;
using F = BigScalar;

TEST(RationalParsing, AcceptsFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("3/4"), mpq_class(3, 4));
  EXPECT_EQ(parse_rational("-1.5e-3"), mpq_class(-3, 2000));
  EXPECT_EQ(parse_rational("0.1"), mpq_class(1, 10));
  EXPECT_EQ(parse_rational("6/8"), mpq_class(3, 4));
  EXPECT_EQ(parse_rational(" 2 "), mpq_class(2));
}

TEST(RationalParsing, RejectsMalformedText) {
  EXPECT_THROW(parse_rational("abc"), InvalidInput);
  EXPECT_THROW(parse_rational("1/0"), InvalidInput);
  EXPECT_THROW(parse_rational(""), InvalidInput);
  EXPECT_THROW(parse_rational("1.2.3"), InvalidInput);
}

TEST(ExactScalar, ConstructionCanonicalizesFractions) {
  EXPECT_EQ(from_rational<Q>(mpq_class(-4, 2)), Q(-2));
  EXPECT_TRUE(is_zero(from_rational<Q>(mpq_class(0, 7))));
}

TEST(ExactScalar, ComplexArithmetic) {
  Q i = imag_unit<Q>();
  EXPECT_EQ(i * i, Q(-1));
  Q z = Q(3) + Q(4) * i;
  EXPECT_EQ(z * (Q(3) - Q(4) * i), Q(25));
  EXPECT_EQ((Q(1) / i), Q(0) - i);
}

TEST(ExactScalar, DivisionByZeroThrows) { EXPECT_THROW(Q(1) / Q(0), DivisionByZero); }

TEST(ExactScalar, IntegerPowersIncludingNegative) {
  Q half = from_rational<Q>(mpq_class(1, 2));
  EXPECT_EQ(pow_int(half, 3), from_rational<Q>(mpq_class(1, 8)));
  EXPECT_EQ(pow_int(half, -3), Q(8));
  EXPECT_EQ(pow_int(half, 0), Q(1));
}

TEST(ExactScalar, SquareRootsOnlyWhenRational) {
  auto r = sqrt_of(from_rational<Q>(mpq_class(9, 4)));
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(*r * *r, from_rational<Q>(mpq_class(9, 4)));
  EXPECT_FALSE(sqrt_of(Q(2)).has_value());
  EXPECT_THROW(require_sqrt(Q(2), "two"), NotRepresentable);
}

TEST(ExactScalar, ApproxEqIsExactEquality) {
  EXPECT_TRUE(approx_eq(Q(1), Q(1), 1.0));
  EXPECT_FALSE(approx_eq(Q(1), from_rational<Q>(mpq_class(1000001, 1000000)), 1.0));
}

TEST(BigFloatScalar, PrecisionScopeSetsDefault) {
  {
    PrecisionScope scope(256);
    EXPECT_EQ(default_precision(), 256);
    F x = parse_real<F>("1/3");
    EXPECT_GE(precision_of(x), 256);
  }
  EXPECT_EQ(default_precision(), kDefaultPrecisionBits);
}

TEST(BigFloatScalar, RelativeToleranceSemantics) {
  PrecisionScope scope(128);
  F one(1);
  F tiny = parse_real<F>("1e-30"), small = parse_real<F>("1e-20");
  EXPECT_TRUE(approx_eq(one, one + tiny, 1e-25));
  EXPECT_FALSE(approx_eq(one, one + small, 1e-25));
  F big = parse_real<F>("1e40");
  EXPECT_TRUE(approx_eq(big, big + parse_real<F>("1e10"), 1e-25));
  EXPECT_THROW(approx_eq(one, one, -1.0), InvalidInput);
}

TEST(BigFloatScalar, SquareRootOfTwoSquaresBack) {
  PrecisionScope scope(128);
  auto r = sqrt_of(F(2));
  ASSERT_TRUE(r.has_value());
  EXPECT_TRUE(approx_eq(*r * *r, F(2), 1e-35));
}

TEST(BigFloatScalar, ZeroPrintsWithoutSign) {
  F z = F(0) - F(0);
  EXPECT_EQ(real_to_string((F(0) * F(-1)).real()), "0");
  EXPECT_EQ(to_string(z), "0");
}

TEST(BigFloatScalar, ImaginaryUnitSquaresToMinusOne) {
  F i = imag_unit<F>();
  EXPECT_TRUE(approx_eq(i * i, F(-1)));
}

TEST(Negligibility, ScaleAwareZeroTest) {
  EXPECT_TRUE(is_negligible(Q(0), 1e-25, 1.0));
  EXPECT_FALSE(is_negligible(from_rational<Q>(mpq_class(1, 1000000)), 1e-3, 1.0));
  PrecisionScope scope(128);
  EXPECT_TRUE(is_negligible(parse_real<F>("1e-20"), 1e-25, 1e6));
  EXPECT_FALSE(is_negligible(parse_real<F>("1e-20"), 1e-25, 1.0));
}
