#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace latticeops;
using Q = ExactScalar;
using F = BigScalar;

namespace {

Q rat(long p, long q = 1) { return from_rational<Q>(mpq_class(p, q)); }

// x(s) = q^-s/2 + 3 q^s/2 - 1 with q = 4, in the same form as the oracle lattices
oracle::LatticeData<Q> q4() { return oracle::sample_lattices<Q>()[1]; }

Ttrr<Q> q_hermite_data(const Lattice<Q>& lat, long N) {
  const Q c12 = lat.c1() * lat.c2();
  Ttrr<Q> t;
  t.C.push_back(Q(0));
  for (long n = 0; n <= N; ++n) {
    t.B.push_back(lat.c3());
    t.C.push_back((Q(1) - pow_int(lat.q(), n + 1)) * c12);
  }
  return t;
}

// D_x P_{n+1} = gamma_{n+1} P_n checked at lattice points straight from the definition of D_x
bool lowering_holds_pointwise(const oracle::LatticeData<Q>& L, const OpSequence<Q>& ops, long n) {
  for (long h : oracle::sample_points(L))
    if (!(oracle::point_dx(L, ops[n + 1], h) == L.lattice().gamma_n(n + 1) * ops[n](L.x(h)))) return false;
  return true;
}

}  // namespace

TEST(Relations, ParseNames) {
  EXPECT_EQ(parse_relation("lower"), Relation::lower);
  EXPECT_EQ(parse_relation("sx_raise"), Relation::sx_raise);
  EXPECT_EQ(parse_relation("counterexample"), Relation::counterexample4term);
  EXPECT_THROW(parse_relation("raise"), InvalidInput);
  EXPECT_STREQ(relation_name(Relation::counterexample4term), "counterexample4term");
}

TEST(Lowering, QHermiteHoldsAndAgreesWithPointwiseCheck) {
  auto lat = q4().lattice();
  OpSequence<Q> ops(lat, q_hermite_data(lat, 13), 13);
  auto rep = check_structure(ops, Relation::lower, 12, 0);
  EXPECT_TRUE(rep.pass()) << rep.first_failure;
  ASSERT_EQ(rep.residuals.size(), 13u);
  for (double r : rep.residuals) EXPECT_EQ(r, 0.0);
  for (long n = 0; n <= 6; ++n) EXPECT_TRUE(lowering_holds_pointwise(q4(), ops, n)) << n;
  EXPECT_TRUE(check_system(lat, ops.ttrr(), 12, 0).pass());
}

TEST(Lowering, ChebyshevUFailsAtTwoButSatisfiesTheSystem) {
  auto lat = q4().lattice();
  auto t = family_ttrr(lat, FamilySpec<Q>{FamilyName::chebyshev_u, {}, {}}, 13);
  OpSequence<Q> ops(lat, t, 13);
  auto rep = check_structure(ops, Relation::lower, 12, 0);
  EXPECT_EQ(rep.first_failure, 2);
  EXPECT_TRUE(lowering_holds_pointwise(q4(), ops, 1));
  EXPECT_FALSE(lowering_holds_pointwise(q4(), ops, 2));
  EXPECT_TRUE(check_system(lat, t, 12, 0).pass());
}

TEST(Lowering, PearsonPairReproducesQHermite) {
  auto lat = q4().lattice();
  auto data = q_hermite_data(lat, 10);
  auto pair = pearson_from_ttrr(lat, data, Relation::lower);
  EXPECT_EQ(pair.psi(), Polynomial<Q>::linear_factor(lat.c3()));
  auto t = ttrr_from_pearson(lat, pair, 10);
  for (long n = 0; n <= 10; ++n) {
    EXPECT_EQ(t.B[n], data.B[n]);
    EXPECT_EQ(t.C[n + 1], data.C[n + 1]);
  }
}

TEST(DifferenceSystem, PerturbedDataFailsWhereItEnters) {
  auto lat = q4().lattice();
  auto t = q_hermite_data(lat, 8);
  t.C[3] = t.C[3] + Q(1);
  auto rep = check_system(lat, t, 6, 0);
  EXPECT_FALSE(rep.pass());
  EXPECT_EQ(rep.first_failure("eq1"), -1);
  EXPECT_EQ(rep.first_failure("eq2"), 1);
  EXPECT_EQ(rep.first_failure("eq4"), 2);
}

TEST(DifferenceSystem, RejectsBadInput) {
  auto lat = q4().lattice();
  EXPECT_THROW(check_system(oracle::sample_lattices<Q>()[3].lattice(), q_hermite_data(lat, 6), 4, 0), InvalidInput);
  EXPECT_THROW(check_system(lat, q_hermite_data(lat, 6), 1, 0), InvalidInput);
  auto t = q_hermite_data(lat, 6);
  t.C[2] = Q(0);
  EXPECT_THROW(check_system(lat, t, 4, 0), NotRegular);
}

TEST(FourTerm, HoldsExactlyWhenTheQuarterRootIsRational) {
  // q = 1/16: q^{1/2} = 1/4, q^{1/4} = 1/2
  auto lat = standard_q_lattice(rat(1, 16));
  auto rep = check_structure(OpSequence<Q>(lat, four_term_family(lat, 9), 9), Relation::counterexample4term, 8, 0);
  EXPECT_TRUE(rep.pass()) << rep.first_failure;
  auto [printed, fam] = four_term_printed_vs_family(lat, 6);
  for (long n = 0; n <= 6; ++n) EXPECT_EQ(printed.C[n + 1], fam.C[n + 1]) << n;
}

TEST(FourTerm, HoldsAtHighPrecision) {
  PrecisionScope scope(192);
  for (int den : {4, 9}) {
    auto lat = standard_q_lattice(F(1) / F(den));
    auto rep =
        check_structure(OpSequence<F>(lat, four_term_family(lat, 11), 11), Relation::counterexample4term, 10, 1e-25);
    EXPECT_TRUE(rep.pass()) << den;
  }
}

TEST(FourTerm, OnlyOnTheStandardLattice) {
  auto lat = q4().lattice();
  OpSequence<Q> ops(lat, q_hermite_data(lat, 4), 4);
  EXPECT_THROW(check_structure(ops, Relation::counterexample4term, 3, 0), InvalidInput);
}

TEST(RaisingSolver, RoundTripAndAskeyWilsonMatch) {
  PrecisionScope scope(128);
  auto lat = Lattice<F>(F(1) / F(4), {F(1), F(2), F(1) / F(3)});
  const F C1 = F(3) / F(10);
  auto sol = solve_first_characterization(lat, C1, 8);
  EXPECT_TRUE(approx_eq(sol.C1_roundtrip, C1, 1e-25));
  EXPECT_TRUE(approx_eq(sol.ttrr.C[1], C1, 1e-25));
  for (const auto& b : sol.ttrr.B) EXPECT_TRUE(approx_eq(b, lat.c3(), 1e-25));
  FamilySpec<F> aw{FamilyName::askey_wilson, first_characterization_aw_params(lat, sol.r), {}};
  EXPECT_TRUE(compare_ttrr(family_ttrr(lat, aw, 8), sol.ttrr, 8, 1e-25).pass);
  auto other = solve_first_characterization(lat, C1, 4, -1);
  EXPECT_TRUE(approx_eq(other.C1_roundtrip, C1, 1e-25));
  EXPECT_THROW(solve_first_characterization(lat, C1, 4, 0), InvalidInput);
}

TEST(RaisingSolver, LowDegreesSatisfyTheRaisingRelation) {
  PrecisionScope scope(128);
  auto lat = Lattice<F>(F(1) / F(4), {F(1), F(2), F(1) / F(3)});
  auto sol = solve_first_characterization(lat, F(3) / F(10), 4);
  auto rep = check_structure(OpSequence<F>(lat, sol.ttrr, 3), Relation::sx_raise, 2, 1e-25);
  EXPECT_TRUE(rep.pass()) << rep.first_failure;
}

TEST(RaisingSolver, NeedsQQuadraticLattice) {
  auto lat = oracle::sample_lattices<Q>()[2].lattice();
  EXPECT_THROW(solve_first_characterization(lat, rat(1, 2), 3), InvalidInput);
}

TEST(UnitBase, MeixnerImageOnLinearLattice) {
  auto lin = oracle::sample_lattices<Q>()[4].lattice();
  auto rep = check_meixner_linear(lin, Q(0), rat(1, 3), 10, 0);
  EXPECT_TRUE(rep.pass()) << rep.first_failure;
  // 4 C1 / c5^2 = 2 is a non-negative integer
  EXPECT_THROW(check_meixner_linear(Lattice<Q>(Q(1), {Q(0), Q(1), Q(0)}), Q(0), rat(1, 2), 4, 0), InvalidInput);
  auto t = meixner_linear_ttrr(Lattice<Q>(Q(1), {Q(0), Q(1), Q(0)}), Q(2), rat(1, 3), 4);
  for (long n = 0; n <= 4; ++n) {
    EXPECT_EQ(t.B[n], Q(2));
    EXPECT_EQ(t.C[n + 1], Q(n + 1) * rat(1, 3) - Q(n + 1) * Q(n) / Q(4));
  }
}

TEST(UnitBase, QuadraticLatticeBreaksTheRaisingRelation) {
  auto quad = oracle::sample_lattices<Q>()[3].lattice();
  auto rep = meixner_quadratic_contrast(quad, Q(0), rat(1, 3), 10, 0);
  EXPECT_FALSE(rep.pass());
  EXPECT_LE(rep.first_failure, 3);
  EXPECT_THROW(meixner_quadratic_contrast(oracle::sample_lattices<Q>()[4].lattice(), Q(0), rat(1, 3), 4, 0), InvalidInput);
}
