#ifndef LATTICEOPS_CHARACTERIZE_HPP
#define LATTICEOPS_CHARACTERIZE_HPP

// Structure relations of orthogonal polynomial sequences on a lattice:
//   raising:  D_x P_{n+1} = (gamma_{n+1}/alpha_n) S_x P_n
//   lowering: D_x P_{n+1} = gamma_{n+1} P_n
// together with the Pearson pairs they force, the difference system satisfied
// by the recurrence data of a lowering sequence, the constructive solution of
// the raising relation on q-quadratic lattices, and a four-term relation for a
// continuous dual q-Hahn sequence.

#include <algorithm>
#include <string>
#include <vector>

#include "latticeops/classical.hpp"
#include "latticeops/error.hpp"
#include "latticeops/families.hpp"
#include "latticeops/functional.hpp"
#include "latticeops/lattice.hpp"
#include "latticeops/operators.hpp"
#include "latticeops/pair.hpp"

namespace latticeops {

enum class Relation { sx_raise, lower, counterexample4term };

inline const char* relation_name(Relation r) {
  switch (r) {
    case Relation::sx_raise: return "sx_raise";
    case Relation::lower: return "lower";
    case Relation::counterexample4term: return "counterexample4term";
  }
  return "?";
}

inline Relation parse_relation(const std::string& s) {
  if (s == "sx_raise") return Relation::sx_raise;
  if (s == "lower") return Relation::lower;
  if (s == "counterexample4term" || s == "counterexample") return Relation::counterexample4term;
  throw InvalidInput("unknown relation '" + s + "'");
}

inline const char* relation_statement(Relation r) {
  switch (r) {
    case Relation::sx_raise: return "D_x P_{n+1} = (gamma_{n+1}/alpha_n) S_x P_n";
    case Relation::lower: return "D_x P_{n+1} = gamma_{n+1} P_n";
    case Relation::counterexample4term:
      return "U2 D_x R_n = (alpha^2-1) gamma_n R_{n+1} + (c_{n+1} - alpha c_n + (1-alpha) alpha_n B_n) R_n"
             " + ((B_n - alpha B_{n-1}) c_n + (1-alpha^2) gamma_n C_n) R_{n-1}"
             " + (c_{n-1} C_n - alpha c_n C_{n-1}) R_{n-2}";
  }
  return "?";
}

/// Per-n residuals of a relation; index n of `residuals` is the n of the relation.
struct StructureReport {
  std::string relation;
  std::string statement;
  std::vector<double> residuals;
  long first_failure = -1;
  std::string note;  // set when the check could not run to the end
  bool pass() const { return first_failure < 0; }
};

namespace detail {

inline void record(StructureReport& rep, long n, double value, bool ok) {
  rep.residuals.push_back(value);
  if (!ok && rep.first_failure < 0) rep.first_failure = n;
}

/// Coefficients of the four-term relation; q is the lattice base, the
/// sequence has base q^{1/2} and parameters (1, -1, q^{1/4}).
template <Scalar S>
struct FourTermData {
  S root, r4;  // q^{1/2}, q^{1/4}
  S B(long n) const {
    S rn = pow_int(root, n);
    return (( S(1) + S(1) / root) * rn + S(1) - S(1) / root) * pow_int(r4, 2 * n + 1) / S(2);
  }
  S C(long n) const {
    if (n <= 0) return S(0);
    return (S(1) + pow_int(root, n - 1)) * (S(1) - pow_int(root, n)) * (S(1) - pow_int(root, 2 * n - 1)) / S(4);
  }
  S c(long n) const {
    if (n <= 0) return S(0);
    return C(n) / pow_int(r4, 2 * n - 1);
  }
};

}  // namespace detail

/// Recurrence data of R_n(x; 1, -1, q^{1/4} | q^{1/2}) on x(s) = (q^{-s}+q^s)/2, q = lat.q().
template <Scalar S>
Ttrr<S> four_term_family(const Lattice<S>& lat, long N) {
  const S r4 = require_sqrt(lat.root(), "q^{1/4}");
  FamilySpec<S> spec{FamilyName::cdq_hahn, {S(1), S(-1), r4}, lat.root()};
  return family_ttrr(lat, spec, N);
}

/// Printed B_n, C_n of the four-term relation next to the family data they stand for.
template <Scalar S>
std::pair<Ttrr<S>, Ttrr<S>> four_term_printed_vs_family(const Lattice<S>& lat, long N) {
  detail::FourTermData<S> f{lat.root(), require_sqrt(lat.root(), "q^{1/4}")};
  Ttrr<S> printed;
  printed.C.push_back(S(0));
  for (long n = 0; n <= N; ++n) {
    printed.B.push_back(f.B(n));
    printed.C.push_back(f.C(n + 1));
  }
  return {printed, four_term_family(lat, N)};
}

/// Evaluates `relation` for n = 0..N. The sequence must hold P_0..P_{N+1}.
template <Scalar S>
StructureReport check_structure(const OpSequence<S>& ops, Relation relation, long N, double eps = kDefaultEps) {
  const Lattice<S>& lat = ops.lattice();
  if (N < 0) throw InvalidInput("check_structure needs N >= 0");
  if (ops.size() < N + 1) throw InvalidInput("check_structure needs P_0..P_{N+1}");
  StructureReport rep{relation_name(relation), relation_statement(relation), {}, -1, {}};

  if (relation == Relation::counterexample4term) {
    const S half = S(1) / S(2);
    if (lat.kind() != LatticeKind::q_quadratic || !(lat.c1() == half) || !(lat.c2() == half) || !is_zero(lat.c3()))
      throw InvalidInput("the four-term relation lives on x(s) = (q^{-s} + q^s)/2");
    detail::FourTermData<S> f{lat.root(), require_sqrt(lat.root(), "q^{1/4}")};
    const S al = lat.alpha(), a2 = al * al - S(1);
    for (long n = 0; n <= N; ++n) {
      Polynomial<S> lhs = lat.u2() * dx(lat, ops[n]);
      Polynomial<S> rhs = (a2 * lat.gamma_n(n)) * ops[n + 1] +
                          (f.c(n + 1) - al * f.c(n) + (S(1) - al) * lat.alpha_n(n) * f.B(n)) * ops[n];
      if (n >= 1) rhs = rhs + ((f.B(n) - al * f.B(n - 1)) * f.c(n) + (S(1) - al * al) * lat.gamma_n(n) * f.C(n)) * ops[n - 1];
      if (n >= 2) rhs = rhs + (f.c(n - 1) * f.C(n) - al * f.c(n) * f.C(n - 1)) * ops[n - 2];
      auto r = compare_polys("", "", lhs, rhs, eps);
      detail::record(rep, n, r.value, r.pass);
    }
    return rep;
  }

  for (long n = 0; n <= N; ++n) {
    Polynomial<S> lhs = dx(lat, ops[n + 1]);
    Polynomial<S> rhs = relation == Relation::sx_raise ? (lat.gamma_n(n + 1) / lat.alpha_n(n)) * sx(lat, ops[n])
                                                       : lat.gamma_n(n + 1) * ops[n];
    auto r = compare_polys("", "", lhs, rhs, eps);
    detail::record(rep, n, r.value, r.pass);
  }
  return rep;
}

// --- Pearson pairs forced by a structure relation ---------------------------

/// sx_raise: psi = B0 - z, phi = (alpha - 1/alpha)(z - c3)(z - B0) + C1/alpha, or 2 beta (z - B0) + C1 on q = 1.
/// lower:    psi = z - B0, phi = (A z - Bc)(z - B0) - (A + alpha) C1 with
///           A = alpha (2 C1 - C2)/C2 and Bc = beta - B0 + 2 alpha B1 C1 / C2.
template <Scalar S>
PearsonPair<S> pearson_from_ttrr(const Lattice<S>& lat, const S& B0, const S& B1, const S& C1, const S& C2,
                                 Relation which) {
  if (is_zero(C1)) throw InvalidInput("C_1 must be nonzero");
  const Polynomial<S> zb = Polynomial<S>::linear_factor(B0);  // z - B0
  const S& al = lat.alpha();
  if (which == Relation::sx_raise) {
    Polynomial<S> psi = S(-1) * zb;
    if (lat.unit_base()) return PearsonPair<S>(S(2) * lat.beta() * zb + Polynomial<S>::constant(C1), psi);
    Polynomial<S> phi = (al - S(1) / al) * (Polynomial<S>::linear_factor(lat.c3()) * zb) +
                        Polynomial<S>::constant(C1 / al);
    return PearsonPair<S>(phi, psi);
  }
  if (which == Relation::lower) {
    if (is_zero(C2)) throw InvalidInput("C_2 must be nonzero");
    const S A = al * (S(2) * C1 - C2) / C2;
    const S Bc = lat.beta() - B0 + S(2) * al * B1 * C1 / C2;
    Polynomial<S> phi = Polynomial<S>({S(0) - Bc, A}) * zb - Polynomial<S>::constant((A + al) * C1);
    return PearsonPair<S>(phi, zb);
  }
  throw InvalidInput("pearson_from_ttrr covers the sx_raise and lower relations");
}

template <Scalar S>
PearsonPair<S> pearson_from_ttrr(const Lattice<S>& lat, const Ttrr<S>& t, Relation which) {
  if (t.B.size() < 2 || t.C.size() < 3) throw InvalidInput("pearson_from_ttrr needs B_0, B_1, C_1, C_2");
  return pearson_from_ttrr(lat, t.B[0], t.B[1], t.C[1], t.C[2], which);
}

// --- difference system of the lowering relation ---------------------------------

struct EquationResidual {
  std::string equation;
  long n;
  double value;
  bool pass;
};

struct SystemReport {
  std::vector<EquationResidual> residuals;  // grouped by equation, increasing n
  double k1 = 0, k2 = 0;                    // real parts of the fitted t_n constants
  bool pass() const {
    return std::all_of(residuals.begin(), residuals.end(), [](const auto& r) { return r.pass; });
  }
  long first_failure(const std::string& eq) const {
    for (const auto& r : residuals)
      if (r.equation == eq && !r.pass) return r.n;
    return -1;
  }
};

inline const char* system_equation_statement(const std::string& eq) {
  if (eq == "eq1") return "c_{n+2} - 2 alpha c_{n+1} + c_n = 0";
  if (eq == "eq2") return "t_{n+2} - 2 alpha t_{n+1} + t_n = 0";
  if (eq == "eq3") return "t_{n+3} B'_{n+2} - (t_{n+2} + t_{n+1}) B'_{n+1} + t_n B'_n = 0";
  if (eq == "eq4")
    return "(t_{n+1} + t_{n+2}) C'_{n+1} - 2(1+alpha) t_n C'_n + (t_{n-1} + t_{n-2}) C'_{n-1}"
           " = t_n (B'_n^2 - 2 alpha B'_n B'_{n-1} + B'_{n-1}^2)";
  if (eq == "eq5") return "c_{n+1} B'_{n+1} + (1 - 2 alpha)(c_n + c_{n+1}) B'_n + c_n B'_{n-1} = 0";
  return "?";
}

/// Residuals of the five difference equations satisfied by the recurrence data
/// of a sequence with D_x P_n = gamma_n P_{n-1} on a q-quadratic lattice, with
/// c_n = gamma_n, t_n = c_n/C_n = k1 q^{n/2} + k2 q^{-n/2} (k1, k2 fitted from
/// t_1, t_2), t_0 = k1 + k2, c_0 = C_0 = 0, B'_n = B_n - c3, C'_n = C_n - c1 c2.
/// Uses B_0..B_N and C_0..C_{N+1}.
template <Scalar S>
SystemReport check_system(const Lattice<S>& lat, const Ttrr<S>& ttrr, long N, double eps = kDefaultEps) {
  if (lat.unit_base()) throw InvalidInput("check_system needs a q != 1 lattice");
  if (N < 2) throw InvalidInput("check_system needs N >= 2");
  if (ttrr.size() < N + 1 || static_cast<long>(ttrr.C.size()) < N + 2)
    throw InvalidInput("check_system needs B_0..B_N and C_1..C_{N+1}");
  for (long n = 1; n <= N + 1; ++n)
    if (is_zero(ttrr.C[static_cast<std::size_t>(n)])) throw NotRegular(n, "C_n = 0");

  const S& al = lat.alpha();
  const S rho = lat.root();
  auto Cv = [&](long n) { return ttrr.C[static_cast<std::size_t>(n)]; };
  auto Bp = [&](long n) { return ttrr.B[static_cast<std::size_t>(n)] - lat.c3(); };
  auto Cp = [&](long n) { return Cv(n) - lat.c1() * lat.c2(); };
  auto c = [&](long n) { return n <= 0 ? S(0) : lat.gamma_n(n); };

  const S t1 = lat.gamma_n(1) / Cv(1), t2 = lat.gamma_n(2) / Cv(2);
  const S det = S(1) / rho - rho;
  const S k1 = (t1 / (rho * rho) - t2 / rho) / det;
  const S k2 = (rho * t2 - rho * rho * t1) / det;
  std::vector<S> t(static_cast<std::size_t>(N + 2));
  t[0] = k1 + k2;
  for (long n = 1; n <= N + 1; ++n) t[static_cast<std::size_t>(n)] = lat.gamma_n(n) / Cv(n);
  auto tv = [&](long n) { return t[static_cast<std::size_t>(n)]; };

  SystemReport rep;
  rep.k1 = real_to_double(k1.real());
  rep.k2 = real_to_double(k2.real());
  auto push = [&](const char* eq, long n, std::initializer_list<S> terms) {
    S sum(0);
    double scale = 1;
    for (const S& v : terms) {
      sum = sum + v;
      scale = std::max(scale, magnitude(v));
    }
    rep.residuals.push_back({eq, n, magnitude(sum), negligible_against(sum, eps, scale)});
  };

  for (long n = 0; n + 2 <= N + 1; ++n) push("eq1", n, {c(n + 2), S(-2) * al * c(n + 1), c(n)});
  for (long n = 0; n + 2 <= N + 1; ++n) push("eq2", n, {tv(n + 2), S(-2) * al * tv(n + 1), tv(n)});
  for (long n = 0; n <= N - 2; ++n)
    push("eq3", n, {tv(n + 3) * Bp(n + 2), S(0) - (tv(n + 2) + tv(n + 1)) * Bp(n + 1), tv(n) * Bp(n)});
  for (long n = 2; n <= N - 1; ++n) {
    const S rhs = tv(n) * (Bp(n) * Bp(n) - S(2) * al * Bp(n) * Bp(n - 1) + Bp(n - 1) * Bp(n - 1));
    push("eq4", n,
         {(tv(n + 1) + tv(n + 2)) * Cp(n + 1), S(-2) * (S(1) + al) * tv(n) * Cp(n),
          (tv(n - 1) + tv(n - 2)) * Cp(n - 1), S(0) - rhs});
  }
  for (long n = 1; n <= N - 1; ++n)
    push("eq5", n, {c(n + 1) * Bp(n + 1), (S(1) - S(2) * al) * (c(n) + c(n + 1)) * Bp(n), c(n) * Bp(n - 1)});
  return rep;
}

// --- constructive solution of the raising relation -----------------------------

template <Scalar S>
struct FirstCharacterization {
  S r;              // free parameter of the solution
  S C1_roundtrip;   // C_1 recovered from r
  PearsonPair<S> pair;
  Ttrr<S> ttrr;
};

/// r = K +- sqrt(1/q + K^2) with K = (C1 + 2(alpha^2-1) c1 c2)/((1-q) c1 c2);
/// phi = -(alpha - 1/alpha)(z - c3)^2 - C1/alpha, psi = z - c3; B_n, C_n from the
/// closed forms for n <= N. `branch` selects the sign (+1 principal, -1 other).
/// Rejects r in {q^{n-1}, -q^{-n} : n >= 0}.
template <Scalar S>
FirstCharacterization<S> solve_first_characterization(const Lattice<S>& lat, const S& C1, long N, int branch = 1,
                                                      double eps = kDefaultEps) {
  if (lat.kind() != LatticeKind::q_quadratic) throw InvalidInput("the raising-relation solver needs a q-quadratic lattice");
  if (branch != 1 && branch != -1) throw InvalidInput("branch must be +1 or -1");
  const S& q = lat.q();
  const S c12 = lat.c1() * lat.c2();
  const S& al = lat.alpha();
  const S K = (C1 + S(2) * (al * al - S(1)) * c12) / ((S(1) - q) * c12);
  const S root = require_sqrt(S(1) / q + K * K, "1/q + K^2");
  const S r = branch > 0 ? K + root : K - root;
  if (is_zero(r)) throw InvalidInput("r = 0");

  // excluded set; q^{n-1} and -q^{-n} leave any bounded neighbourhood of r after finitely many n
  const double rabs = magnitude(r);
  const double lq = std::abs(std::log(real_to_double(q.real())));
  const long reach = static_cast<long>(std::abs(std::log(std::max(rabs, 1e-300))) / lq) + 4;
  for (long n = 0; n <= reach; ++n) {
    if (approx_eq(r, pow_int(q, n - 1), eps))
      throw InvalidInput("r = q^{" + std::to_string(n - 1) + "} lies in the excluded set");
    if (approx_eq(r, S(0) - pow_int(q, -n), eps))
      throw InvalidInput("r = -q^{" + std::to_string(-n) + "} lies in the excluded set");
  }

  const S back = (S(1) - S(1) / q) * (S(1) + S(1) / r) * (S(1) - r * q) * c12 / S(2);
  const Polynomial<S> w = Polynomial<S>::linear_factor(lat.c3());
  PearsonPair<S> pair((S(0) - (al - S(1) / al)) * (w * w) - Polynomial<S>::constant(C1 / al), w);
  return {r, back, pair, ttrr_from_pearson(lat, pair, N, eps)};
}

/// Askey-Wilson parameters (sqrt r, -sqrt r, i/sqrt(rq), -i/sqrt(rq)) matching the constructed solution.
template <Scalar S>
std::vector<S> first_characterization_aw_params(const Lattice<S>& lat, const S& r) {
  const S a = require_sqrt(r, "r");
  const S b = imag_unit<S>() / require_sqrt(r * lat.q(), "r q");
  return {a, S(0) - a, b, S(0) - b};
}

// --- linear versus quadratic lattices ----------------------------------------------

/// B_n = B0, C_n = n C1 - (c5^2/4) n (n-1): the recurrence of (i c5/2)^n M_n(2i(B0 - z)/c5; 0, -4 C1/c5^2).
template <Scalar S>
Ttrr<S> meixner_linear_ttrr(const Lattice<S>& lat, const S& B0, const S& C1, long N) {
  if (lat.kind() != LatticeKind::linear || is_zero(lat.c5()))
    throw InvalidInput("the Meixner image needs a linear lattice with c5 != 0");
  const S ratio = S(4) * C1 / (lat.c5() * lat.c5());
  if (ratio.is_real()) {
    const double v = real_to_double(ratio.real());
    const double k = std::round(v);
    if (k >= 0 && approx_eq(ratio, S(static_cast<long>(k))))
      throw InvalidInput("4 C1 / c5^2 is a non-negative integer; the sequence is not regular");
  }
  Ttrr<S> t;
  t.C.push_back(S(0));
  const S quarter = lat.c5() * lat.c5() / S(4);
  for (long n = 0; n <= N; ++n) {
    t.B.push_back(B0);
    const S m(n + 1);
    t.C.push_back(m * C1 - quarter * m * S(n));
  }
  return t;
}

/// Raising relation for the Meixner image on a linear lattice, n <= N.
template <Scalar S>
StructureReport check_meixner_linear(const Lattice<S>& lat, const S& B0, const S& C1, long N,
                                     double eps = kDefaultEps) {
  auto t = meixner_linear_ttrr(lat, B0, C1, N + 1);
  return check_structure(OpSequence<S>(lat, t, N + 1), Relation::sx_raise, N, eps);
}

/// Same check on a lattice with beta != 0, using the recurrence that the closed
/// forms produce from the raising-relation pair 2 beta (z - B0) + C1, B0 - z.
/// The relation is expected to break; a failure of regularity counts as breaking
/// at the level where it occurs.
template <Scalar S>
StructureReport meixner_quadratic_contrast(const Lattice<S>& lat, const S& B0, const S& C1, long N,
                                           double eps = kDefaultEps) {
  if (!lat.unit_base() || is_zero(lat.beta())) throw InvalidInput("the contrast needs a q = 1 lattice with beta != 0");
  auto pair = pearson_from_ttrr(lat, B0, S(0), C1, S(1), Relation::sx_raise);
  StructureReport rep{relation_name(Relation::sx_raise), relation_statement(Relation::sx_raise), {}, -1, {}};
  Ttrr<S> t;
  try {
    t = ttrr_from_pearson(lat, pair, N + 1, eps);
  } catch (const NotRegular& e) {
    rep.first_failure = std::max(0L, e.level() - 1);
    rep.note = e.what();
    return rep;
  } catch (const AdmissibilityFailure& e) {
    rep.first_failure = e.index();
    rep.note = e.what();
    return rep;
  }
  return check_structure(OpSequence<S>(lat, t, N + 1), Relation::sx_raise, N, eps);
}

}  // namespace latticeops

#endif  // LATTICEOPS_CHARACTERIZE_HPP
