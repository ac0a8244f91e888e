#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace latticeops;
using Q = ExactScalar;
using F = BigScalar;

namespace {

Q rat(long p, long q = 1) { return from_rational<Q>(mpq_class(p, q)); }

Ttrr<Q> family(const Lattice<Q>& lat, FamilyName name, std::vector<Q> params, long N) {
  return family_ttrr(lat, FamilySpec<Q>{name, std::move(params), {}}, N);
}

void expect_same(const Ttrr<Q>& a, const Ttrr<Q>& b, long N) {
  for (long n = 0; n <= N; ++n) {
    EXPECT_EQ(a.B[n], b.B[n]) << "B_" << n;
    EXPECT_EQ(a.C[n + 1], b.C[n + 1]) << "C_" << n + 1;
  }
}

}  // namespace

TEST(FamilyNames, ParseAndArity) {
  EXPECT_EQ(parse_family("cdq_hahn"), FamilyName::cdq_hahn);
  EXPECT_THROW(parse_family("hahn"), InvalidInput);
  EXPECT_EQ(family_arity(FamilyName::askey_wilson), 4u);
  EXPECT_EQ(family_arity(FamilyName::q_hermite), 0u);
  auto lat = standard_q_lattice(rat(1, 4));
  EXPECT_THROW(family(lat, FamilyName::al_salam, {rat(1, 2)}, 3), InvalidInput);
}

TEST(QHermite, StandardRecurrence) {
  // monic continuous q-Hermite on x = cos theta: B_n = 0, C_{n+1} = (1 - q^{n+1})/4
  auto lat = standard_q_lattice(rat(1, 4));
  auto t = family(lat, FamilyName::q_hermite, {}, 10);
  for (long n = 0; n <= 10; ++n) {
    EXPECT_EQ(t.B[n], Q(0));
    EXPECT_EQ(t.C[n + 1], (Q(1) - pow_int(rat(1, 4), n + 1)) / Q(4));
  }
}

TEST(FamilyHierarchy, AskeyWilsonWithTwoZeroParametersIsAlSalamChihara) {
  auto lat = standard_q_lattice(rat(1, 4));
  auto aw = family(lat, FamilyName::askey_wilson, {rat(1, 2), rat(-1, 3), Q(0), Q(0)}, 8);
  auto asc = family(lat, FamilyName::al_salam, {rat(1, 2), rat(-1, 3)}, 8);
  expect_same(aw, asc, 8);
}

TEST(FamilyHierarchy, AskeyWilsonWithOneZeroParameterIsDualHahn) {
  auto lat = standard_q_lattice(rat(1, 9));
  auto aw = family(lat, FamilyName::askey_wilson, {rat(1, 2), rat(2, 3), rat(-1, 5), Q(0)}, 8);
  auto cdq = family(lat, FamilyName::cdq_hahn, {rat(1, 2), rat(2, 3), rat(-1, 5)}, 8);
  expect_same(aw, cdq, 8);
}

TEST(FamilyHierarchy, AlSalamChiharaAtZeroIsQHermite) {
  auto lat = standard_q_lattice(rat(1, 4));
  expect_same(family(lat, FamilyName::al_salam, {Q(0), Q(0)}, 8), family(lat, FamilyName::q_hermite, {}, 8), 8);
}

TEST(AskeyWilson, SymmetricParametersGiveZeroB) {
  auto lat = standard_q_lattice(rat(1, 4));
  auto t = family(lat, FamilyName::askey_wilson, {rat(1, 2), rat(-1, 2), rat(1, 3), rat(-1, 3)}, 8);
  for (long n = 0; n <= 8; ++n) EXPECT_EQ(t.B[n], Q(0)) << n;
}

TEST(AskeyWilson, RecurrenceMatchesMomentsOfTheWeight) {
  // B_0 is the mean of x under the weight and C_1 its variance; for Al-Salam-Chihara
  // (a, b) on x = cos theta these are (a + b)/2 and (1 - ab)(1 - q)/4.
  auto lat = standard_q_lattice(rat(1, 4));
  const Q a = rat(1, 2), b = rat(1, 5);
  auto t = family(lat, FamilyName::askey_wilson, {a, b, Q(0), Q(0)}, 2);
  EXPECT_EQ(t.B[0], (a + b) / Q(2));
  EXPECT_EQ(t.C[1], (Q(1) - a * b) * (Q(1) - rat(1, 4)) / Q(4));
}

TEST(AskeyWilson, RestrictionsAreEnforced) {
  auto lat = standard_q_lattice(rat(1, 4));
  EXPECT_THROW(family(lat, FamilyName::askey_wilson, {Q(2), rat(1, 2), Q(0), Q(0)}, 4), InvalidInput);  // a1 a2 = 1
  EXPECT_THROW(family(lat, FamilyName::cdq_hahn, {Q(0), Q(1), Q(1)}, 4), InvalidInput);
}

TEST(AskeyWilson, BigfloatComplexParameters) {
  PrecisionScope scope(128);
  auto lat = standard_q_lattice(F(1) / F(4));
  F i = imag_unit<F>();
  auto t = family_ttrr(lat, FamilySpec<F>{FamilyName::askey_wilson, {F(1) / F(2), F(-1) / F(2), i / F(3), F(0) - i / F(3)}, {}}, 6);
  for (long n = 0; n <= 6; ++n) {
    EXPECT_TRUE(t.C[n + 1].is_real() || approx_eq(t.C[n + 1], F(t.C[n + 1].real()), 1e-30));
    EXPECT_TRUE(approx_eq(t.B[n], F(0), 1e-30));
  }
}

TEST(Meixner2, ClosedFormValues) {
  auto lat = Lattice<Q>(Q(1), {Q(0), Q(1), Q(0)});
  const Q b1 = rat(1, 2), b2 = rat(3);
  auto t = family(lat, FamilyName::meixner2, {b1, b2}, 6);
  for (long n = 0; n <= 6; ++n) {
    EXPECT_EQ(t.B[n], Q(0) - b1 * (Q(2 * n) + b2));
    EXPECT_EQ(t.C[n + 1], (b1 * b1 + Q(1)) * Q(n + 1) * (Q(n) + b2));
  }
  EXPECT_EQ(t.C[1], rat(15, 4));
}

TEST(Meixner2, ParameterRestrictions) {
  auto lat = Lattice<Q>(Q(1), {Q(0), Q(1), Q(0)});
  EXPECT_THROW(family(lat, FamilyName::meixner2, {Q(1), Q(0)}, 3), InvalidInput);
  EXPECT_THROW(family(lat, FamilyName::meixner2, {Q(1), Q(-2)}, 3), InvalidInput);
  EXPECT_THROW(family(lat, FamilyName::meixner2, {imag_unit<Q>(), Q(1)}, 3), InvalidInput);
  EXPECT_NO_THROW(family(lat, FamilyName::meixner2, {Q(1), rat(-1, 2)}, 3));
}

TEST(AffineTransport, GeneralLatticeScalesTheRecurrence) {
  // x(s) = q^-s + 4 q^s + 1 is lambda x_std + c3 with lambda = 4
  auto std_lat = standard_q_lattice(rat(1, 4));
  auto lat = Lattice<Q>(rat(1, 4), {Q(1), Q(4), Q(1)});
  auto a = family(std_lat, FamilyName::al_salam, {rat(1, 2), rat(1, 3)}, 6);
  auto b = family(lat, FamilyName::al_salam, {rat(1, 2), rat(1, 3)}, 6);
  for (long n = 0; n <= 6; ++n) {
    EXPECT_EQ(b.B[n], Q(4) * a.B[n] + Q(1));
    EXPECT_EQ(b.C[n + 1], Q(16) * a.C[n + 1]);
  }
}

TEST(AffineTransport, SymmetricFamilyNeedsNoSquareRoot) {
  // 4 c1 c2 = 3 has no rational square root, but q-Hermite only needs lambda^2
  auto lat = Lattice<Q>(rat(4), {rat(1, 2), rat(3, 2), rat(-1)});
  auto t = family(lat, FamilyName::q_hermite, {}, 5);
  for (long n = 0; n <= 5; ++n) {
    EXPECT_EQ(t.B[n], Q(-1));
    EXPECT_EQ(t.C[n + 1], Q(3) * (Q(1) - pow_int(Q(4), n + 1)) / Q(4));
  }
  EXPECT_THROW(family(lat, FamilyName::al_salam, {rat(1, 2), rat(1, 3)}, 3), NotRepresentable);
}

TEST(FamilyLattices, QFamiliesNeedQQuadraticLattice) {
  auto lin = Lattice<Q>(Q(1), {Q(0), Q(1), Q(0)});
  EXPECT_THROW(family(lin, FamilyName::q_hermite, {}, 3), InvalidInput);
  EXPECT_THROW(family(lin, FamilyName::chebyshev_u, {}, 3), InvalidInput);
}

TEST(FamilyLattices, BaseOverride) {
  auto lat = standard_q_lattice(rat(1, 4));
  auto t = family_ttrr(lat, FamilySpec<Q>{FamilyName::q_hermite, {}, rat(1, 9)}, 3);
  EXPECT_EQ(t.C[1], (Q(1) - rat(1, 9)) / Q(4));
  EXPECT_THROW(family_ttrr(lat, FamilySpec<Q>{FamilyName::q_hermite, {}, Q(1)}, 3), InvalidInput);
}

TEST(ChebyshevU, ConstantRecurrence) {
  auto lat = Lattice<Q>(rat(4), {rat(1, 2), rat(3, 2), rat(-1)});
  auto t = family(lat, FamilyName::chebyshev_u, {}, 5);
  for (long n = 0; n <= 5; ++n) {
    EXPECT_EQ(t.B[n], Q(-1));
    EXPECT_EQ(t.C[n + 1], rat(3, 4));
  }
}

TEST(BuildOps, MonicOfEachDegree) {
  auto lat = standard_q_lattice(rat(1, 4));
  auto ops = build_ops(lat, family(lat, FamilyName::q_hermite, {}, 6), 6);
  EXPECT_EQ(ops.size(), 6);
  for (long n = 0; n <= 6; ++n) {
    EXPECT_EQ(ops[n].degree(), n);
    EXPECT_EQ(ops[n].leading(), Q(1));
  }
  EXPECT_THROW(ops[7], InvalidInput);
}
