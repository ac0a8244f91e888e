#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace latticeops;
using Q = ExactScalar;

namespace {

MomentFunctional<Q> random_u(oracle::Rng& rng, long horizon) {
  std::vector<Q> mu;
  for (long i = 0; i <= horizon; ++i) mu.push_back(oracle::small<Q>(rng, 7, 3));
  return functional_from(mu);
}

MomentFunctional<Q> regular_u(oracle::Rng& rng, long horizon, long N) {
  for (;;) {
    auto u = random_u(rng, horizon);
    if (oracle::gram_ttrr(u.moments(), N).singular_at < 0) return u;
  }
}

}  // namespace

TEST(MomentFunctionals, PairingIsLinearInThePolynomial) {
  oracle::Rng rng(31);
  auto u = random_u(rng, 12);
  auto f = oracle::poly<Q>(rng, 6), g = oracle::poly<Q>(rng, 5);
  EXPECT_EQ(apply(u, f + Q(3) * g), apply(u, f) + Q(3) * apply(u, g));
  EXPECT_EQ(apply(u, Polynomial<Q>::monomial(4)), u[4]);
}

TEST(MomentFunctionals, LeftMultiplicationByDefinition) {
  oracle::Rng rng(32);
  auto u = random_u(rng, 14);
  auto f = oracle::poly<Q>(rng, 3);
  auto fu = left_multiply(u, f);
  EXPECT_EQ(fu.horizon(), 14 - f.degree());
  for (int i = 0; i < 5; ++i) {
    auto g = oracle::poly<Q>(rng, 8);
    EXPECT_EQ(apply(fu, g), apply(u, f * g));
  }
}

TEST(MomentFunctionals, DualOperatorsAreTransposes) {
  // <D u, f> = -<u, D f>, <S u, f> = <u, S f>, with D, S from their pointwise definitions
  oracle::Rng rng(33);
  for (const auto& L : oracle::sample_lattices<Q>()) {
    auto lat = L.lattice();
    auto u = random_u(rng, 10);
    auto Du = dual_dx(lat, u), Su = dual_sx(lat, u);
    EXPECT_EQ(Du.horizon(), 11);
    EXPECT_EQ(Su.horizon(), 10);
    for (int i = 0; i < 4; ++i) {
      auto f = oracle::poly<Q>(rng, 9);
      std::vector<Q> zs, dvals, svals;
      for (long h : oracle::sample_points(L, static_cast<int>(f.degree()) + 1)) {
        zs.push_back(L.x(h));
        dvals.push_back(oracle::point_dx(L, f, h));
        svals.push_back(oracle::point_sx(L, f, h));
      }
      EXPECT_EQ(apply(Du, f), Q(0) - apply(u, interpolate(zs, dvals))) << kind_name(lat.kind());
      EXPECT_EQ(apply(Su, f), apply(u, interpolate(zs, svals))) << kind_name(lat.kind());
    }
  }
}

TEST(MomentFunctionals, HorizonIsEnforced) {
  auto u = functional_from(std::vector<Q>{Q(1), Q(2), Q(3)});
  EXPECT_THROW(apply(u, Polynomial<Q>::monomial(3)), HorizonExhausted);
  EXPECT_THROW(left_multiply(u, Polynomial<Q>::monomial(4)), HorizonExhausted);
}

TEST(FunctionalIdentities, DualsAndLeibnizHoldExactly) {
  oracle::Rng rng(34);
  for (const auto& L : oracle::sample_lattices<Q>()) {
    auto lat = L.lattice();
    auto u = random_u(rng, 26);
    auto f = oracle::poly<Q>(rng, 4);
    for (long n = 1; n <= 3; ++n)
      for (auto id : {FunctionalIdentity::dual_product_dx, FunctionalIdentity::dual_product_sx,
                      FunctionalIdentity::dual_dxn_sx}) {
        auto r = verify_functional_identity(lat, id, f, u, n, 10, 0);
        EXPECT_TRUE(r.pass) << kind_name(lat.kind()) << " " << r.name << " n=" << n;
      }
    for (long n = 0; n <= 5; ++n)
      EXPECT_TRUE(verify_functional_identity(lat, FunctionalIdentity::leibniz, f, u, n, 10, 0).pass)
          << kind_name(lat.kind()) << " n=" << n;
  }
}

TEST(FunctionalIdentities, DegreeTwoLeibnizMatchesGeneralSum) {
  oracle::Rng rng(35);
  for (const auto& L : oracle::sample_lattices<Q>()) {
    auto lat = L.lattice();
    auto u = random_u(rng, 26);
    Polynomial<Q> f({oracle::small<Q>(rng), oracle::small<Q>(rng), Q(2)});
    if (lat.unit_base()) {
      EXPECT_THROW(verify_functional_identity(lat, FunctionalIdentity::leibniz_deg2, f, u, 2, 10, 0), InvalidInput);
      continue;
    }
    for (long n = 0; n <= 6; ++n)
      EXPECT_TRUE(verify_functional_identity(lat, FunctionalIdentity::leibniz_deg2, f, u, n, 10, 0).pass) << n;
  }
}

TEST(PearsonMoments, SolveTheFunctionalEquation) {
  oracle::Rng rng(36);
  for (const auto& L : oracle::sample_lattices<Q>()) {
    auto lat = L.lattice();
    auto p = oracle::pair<Q>(rng);
    try {
      auto u = pearson_moments(lat, p, Q(1), 12);
      auto defect = pearson_defect(lat, p, u, 10);
      for (long k = 0; k <= 10; ++k) EXPECT_TRUE(is_zero(defect[k])) << kind_name(lat.kind()) << " k=" << k;
    } catch (const AdmissibilityFailure&) {
      // a random pair may hit d_n = 0; that is covered elsewhere
    }
  }
}

TEST(PearsonMoments, InadmissiblePairStops) {
  // q = 1: d_n = a n + d vanishes at n = 3 for a = 1, d = -3
  auto lat = Lattice<Q>(Q(1), {Q(0), Q(1), Q(0)});
  auto p = PearsonPair<Q>::from_coeffs(Q(1), Q(0), Q(1), Q(-3), Q(1));
  EXPECT_THROW(pearson_moments(lat, p, Q(1), 8), AdmissibilityFailure);
}

TEST(RecurrenceOracle, AgreesWithGramSystem) {
  oracle::Rng rng(37);
  for (const auto& L : oracle::sample_lattices<Q>()) {
    auto lat = L.lattice();
    for (int i = 0; i < 3; ++i) {
      auto u = random_u(rng, 21);
      auto ref = oracle::gram_ttrr(u.moments(), 8);
      if (ref.singular_at >= 0) {
        EXPECT_THROW(ttrr_oracle(u, 8), NotRegular);
        continue;
      }
      auto t = ttrr_oracle(u, 8);
      for (long n = 0; n <= 8; ++n) EXPECT_EQ(t.B[n], ref.B[n]) << n;
      for (long n = 1; n <= 8; ++n) EXPECT_EQ(t.C[n], ref.C[n]) << n;
    }
  }
}

TEST(RecurrenceOracle, HankelDeterminantsGiveC) {
  oracle::Rng rng(38);
  auto u = regular_u(rng, 21, 7);
  auto H = hankel_determinants(u, 7);
  auto t = ttrr_oracle(u, 6);
  // C_n = H_{n-1} H_{n+1} / H_n^2 with H_k the k x k determinant, H_0 = 1
  for (long n = 1; n <= 5; ++n) EXPECT_EQ(t.C[n], H[n - 1] * H[n + 1] / (H[n] * H[n])) << n;
}

TEST(RecurrenceOracle, PolynomialsAreOrthogonal) {
  oracle::Rng rng(39);
  auto u = regular_u(rng, 21, 8);
  auto t = ttrr_oracle(u, 8);
  auto P = build_polys(t, 8);
  for (long n = 0; n <= 8; ++n) {
    EXPECT_EQ(P[n].degree(), n);
    EXPECT_EQ(P[n].leading(), Q(1));
    for (long m = 0; m < n; ++m) EXPECT_TRUE(is_zero(apply(u, P[n] * P[m]))) << n << "," << m;
  }
}

TEST(RecurrenceOracle, SingularFunctionalIsReported) {
  // mu = (1, 0, 0, ...) has H_2 = 0
  std::vector<Q> mu(12, Q(0));
  mu[0] = Q(1);
  EXPECT_THROW(ttrr_oracle(functional_from(mu), 4), NotRegular);
}
