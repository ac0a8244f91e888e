#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace latticeops;
using Q = ExactScalar;
using F = BigScalar;

namespace {

Q rat(long p, long q = 1) { return from_rational<Q>(mpq_class(p, q)); }

}  // namespace

TEST(LatticeKinds, ClassifiedFromConstants) {
  EXPECT_EQ(Lattice<Q>(rat(1, 4), {rat(1), rat(2), rat(0)}).kind(), LatticeKind::q_quadratic);
  EXPECT_EQ(Lattice<Q>(rat(4), {rat(0), rat(1), rat(0)}).kind(), LatticeKind::q_linear);
  EXPECT_EQ(Lattice<Q>(rat(1), {rat(1), rat(0), rat(0)}).kind(), LatticeKind::quadratic);
  EXPECT_EQ(Lattice<Q>(rat(1), {rat(0), rat(1), rat(0)}).kind(), LatticeKind::linear);
}

TEST(LatticeKinds, RejectsDegenerateInput) {
  EXPECT_THROW(Lattice<Q>(rat(0), {rat(1), rat(1), rat(0)}), InvalidInput);
  EXPECT_THROW(Lattice<Q>(rat(-4), {rat(1), rat(1), rat(0)}), InvalidInput);
  EXPECT_THROW(Lattice<Q>(rat(4), {rat(0), rat(0), rat(1)}), InvalidInput);
  EXPECT_THROW(Lattice<Q>(rat(1), {rat(0), rat(0), rat(0)}), InvalidInput);
}

TEST(LatticeKinds, ExactBackendNeedsRationalRoot) {
  EXPECT_THROW(Lattice<Q>(rat(2), {rat(1), rat(1), rat(0)}), NotRepresentable);
  PrecisionScope scope(128);
  EXPECT_NO_THROW(Lattice<F>(F(2), {F(1), F(1), F(0)}));
}

TEST(LatticeSequences, MatchPowerSumsOfTheRoot) {
  // t = 2: alpha_n = (2^n + 2^-n)/2, gamma_n = sum_{k<n} 2^{n-1-2k}
  auto lat = Lattice<Q>(rat(4), {rat(1), rat(1), rat(0)});
  const Q t = rat(2);
  for (long n = 0; n <= 12; ++n) {
    Q an = (pow_int(t, n) + pow_int(t, -n)) / Q(2);
    Q gn(0);
    for (long k = 0; k < n; ++k) gn = gn + pow_int(t, n - 1 - 2 * k);
    EXPECT_EQ(lat.alpha_n(n), an) << "n=" << n;
    EXPECT_EQ(lat.gamma_n(n), gn) << "n=" << n;
  }
  EXPECT_EQ(lat.alpha_n(-1), lat.alpha());
  EXPECT_EQ(lat.gamma_n(-1), Q(-1));
  EXPECT_EQ(lat.alpha(), rat(5, 4));
}

TEST(LatticeSequences, UnitBaseIsArithmetic) {
  auto lat = Lattice<Q>(rat(1), {rat(1), rat(0), rat(0)});
  for (long n = 0; n <= 10; ++n) {
    EXPECT_EQ(lat.alpha_n(n), Q(1));
    EXPECT_EQ(lat.gamma_n(n), Q(n));
  }
  EXPECT_EQ(lat.beta(), rat(1, 4));
}

TEST(LatticeSequences, BeyondTheTableAgreesWithTheTable) {
  auto small = Lattice<Q>(rat(1, 4), {rat(1), rat(2), rat(1, 3)}, 4);
  auto large = Lattice<Q>(rat(1, 4), {rat(1), rat(2), rat(1, 3)}, 40);
  for (long n = 0; n <= 30; ++n) {
    EXPECT_EQ(small.alpha_n(n), large.alpha_n(n));
    EXPECT_EQ(small.gamma_n(n), large.gamma_n(n));
    EXPECT_EQ(small.beta_n(n), large.beta_n(n));
  }
}

TEST(LatticeSequences, GammaFactorialIsRunningProduct) {
  auto lat = Lattice<Q>(rat(4), {rat(1), rat(1), rat(0)});
  Q p(1);
  for (long n = 0; n <= 8; ++n) {
    if (n > 0) p = p * lat.gamma_n(n);
    EXPECT_EQ(lat.gamma_factorial(n), p);
  }
}

TEST(LatticePoints, AgreeWithDefiningFormula) {
  for (const auto& L : oracle::sample_lattices<Q>()) {
    auto lat = L.lattice();
    for (long h = -7; h <= 7; ++h) EXPECT_EQ(lat.x_half(h), L.x(h)) << kind_name(lat.kind()) << " h=" << h;
    EXPECT_EQ(lat.x_eval(mpq_class(3, 2)), L.x(3));
    EXPECT_THROW(lat.x_eval(mpq_class(1, 3)), InvalidInput);
  }
}

TEST(LatticePoints, NeighbourSumIsAffineInX) {
  // x(s + 1/2) + x(s - 1/2) = 2 alpha x(s) + 2 beta
  for (const auto& L : oracle::sample_lattices<Q>()) {
    auto lat = L.lattice();
    for (long h = -6; h <= 6; h += 2)
      EXPECT_EQ(L.x(h + 1) + L.x(h - 1), Q(2) * lat.alpha() * L.x(h) + Q(2) * lat.beta()) << kind_name(lat.kind());
  }
}

TEST(LatticePoints, HalfGapSquaredIsU2) {
  // ((x(s + 1/2) - x(s - 1/2))/2)^2 = U2(x(s))
  for (const auto& L : oracle::sample_lattices<Q>()) {
    auto lat = L.lattice();
    for (long h = -6; h <= 6; h += 2) {
      Q g = (L.x(h + 1) - L.x(h - 1)) / Q(2);
      EXPECT_EQ(g * g, lat.u2()(L.x(h))) << kind_name(lat.kind()) << " h=" << h;
    }
  }
}

TEST(LatticePolynomials, U1ClosedForms) {
  auto qlat = Lattice<Q>(rat(4), {rat(1, 2), rat(3, 2), rat(-1)});
  const Q a2 = qlat.alpha() * qlat.alpha() - Q(1);
  EXPECT_EQ(qlat.u1(), a2 * Polynomial<Q>({Q(1), Q(1)}));  // (alpha^2 - 1)(z - c3), c3 = -1
  auto ulat = Lattice<Q>(rat(1), {rat(3), rat(1), rat(2)});
  EXPECT_EQ(ulat.u1(), Polynomial<Q>::constant(rat(3, 2)));
  EXPECT_EQ(ulat.u2(), Polynomial<Q>({rat(1, 4) - rat(6), rat(3)}));
}

TEST(LatticePoints, NodesHaveDistinctAbscissae) {
  auto lat = Lattice<Q>(rat(1), {rat(1), rat(0), rat(0)});  // x(s) = s^2 collides at +-s
  auto nodes = lat.nodes(6);
  ASSERT_EQ(nodes.size(), 6u);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j) EXPECT_NE(nodes[i].second, nodes[j].second);
}

TEST(LatticePrecision, BigfloatAgreesWithExact) {
  PrecisionScope scope(128);
  auto Le = oracle::q_data<Q>(mpq_class(1, 2), 1, 2, mpq_class(1, 3)).lattice();
  auto Lf = oracle::q_data<F>(mpq_class(1, 2), 1, 2, mpq_class(1, 3)).lattice();
  for (long n = 0; n <= 20; ++n) {
    F ge = from_rational<F>(Le.gamma_n(n).real());
    EXPECT_TRUE(approx_eq(Lf.gamma_n(n), ge, 1e-35)) << n;
  }
  auto hi = Lf.with_precision(256);
  EXPECT_GE(precision_of(hi.root()), 256);
}
