#ifndef LATTICEOPS_TOOLS_BATTERY_HPP
#define LATTICEOPS_TOOLS_BATTERY_HPP

// The acceptance battery: ten numbered criteria, each reduced to one pass/fail
// verdict with a short detail string. Shared by `latticeops all` and the
// acceptance test binary.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "latticeops/latticeops.hpp"

namespace latticeops::battery {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = true;
  std::string detail;
  double seconds = 0;
};

// Pinned tolerances and limits.
inline constexpr double kBigTol = 1e-25;        // bigfloat residuals, criteria 1, 3, 6, 8
inline constexpr double kLimitTolQ = 1e-6;      // q != 1 asymptotic estimates at n = 300
inline constexpr double kLimitTolUnit = 1e-2;   // q = 1 asymptotic estimates at n = 10^4
inline constexpr double kOpsSeconds = 30;       // criterion 1 runtime limit
inline constexpr double kAsymSeconds = 60;      // criterion 10 runtime limit

using Rng = std::mt19937_64;

template <Scalar S>
S random_small(Rng& rng, int num = 5, int den = 4) {
  std::uniform_int_distribution<int> n(-num, num), d(1, den);
  return from_rational<S>(mpq_class(n(rng), d(rng)));
}

template <Scalar S>
Polynomial<S> random_poly(Rng& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  int k = deg(rng);
  std::vector<S> c;
  for (int i = 0; i <= k; ++i) c.push_back(random_small<S>(rng));
  if (is_zero(c.back())) c.back() = S(1);
  return Polynomial<S>(c);
}

template <Scalar S>
MomentFunctional<S> random_functional(Rng& rng, long horizon) {
  std::vector<S> mu;
  for (long i = 0; i <= horizon; ++i) mu.push_back(random_small<S>(rng, 7, 3));
  return functional_from(mu);
}

/// A random pair that is regular up to N on `lat` (resampled until it is).
template <Scalar S>
PearsonPair<S> random_regular_pair(const Lattice<S>& lat, Rng& rng, long N) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    S a = random_small<S>(rng), b = random_small<S>(rng), c = random_small<S>(rng);
    S d = random_small<S>(rng), e = random_small<S>(rng);
    if (is_zero(d)) d = S(1);
    auto p = PearsonPair<S>::from_coeffs(a, b, c, d, e);
    if (regularity(lat, p, N).regular()) return p;
  }
  throw ConsistencyFailure("could not sample a regular pair");
}

template <Scalar S>
Lattice<S> lattice_of(const char* kind) {
  const std::string k = kind;
  auto r = [](long p, long q = 1) { return from_rational<S>(mpq_class(p, q)); };
  if (k == "q=1/4") return Lattice<S>(r(1, 4), {r(1), r(2), r(1, 3)});
  if (k == "q=4") return Lattice<S>(r(4), {r(1, 2), r(3, 2), r(-1)});
  if (k == "q-linear") return Lattice<S>(r(4), {r(0), r(1), r(1, 2)});
  if (k == "x=s^2") return Lattice<S>(r(1), {r(1), r(0), r(0)});
  if (k == "x=s") return Lattice<S>(r(1), {r(0), r(1), r(0)});
  throw InvalidInput("unknown battery lattice");
}

inline double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// --- 1: operator identities ---------------------------------------------------

template <Scalar S>
void operator_identities_on(const char* kind, Rng& rng, int pairs, bool& ok, double& worst, std::string& failed) {
  auto lat = lattice_of<S>(kind);
  const double eps = is_exact_v<S> ? 0 : kBigTol;
  for (int i = 0; i < pairs; ++i) {
    auto f = random_poly<S>(rng, 8), g = random_poly<S>(rng, 8);
    long n = 1 + i % 4;
    for (auto id : {OperatorIdentity::product_dx, OperatorIdentity::product_sx, OperatorIdentity::swap_sx,
                    OperatorIdentity::swap_dx, OperatorIdentity::dxn_sx}) {
      auto r = verify_operator_identity(lat, id, f, g, n, eps);
      // relative size, so large coefficients on q = 4 do not inflate the figure
      double scale = std::max(1.0, max_abs_coeff(f) * max_abs_coeff(g));
      worst = std::max(worst, is_exact_v<S> ? r.value : r.value / scale);
      if (!r.pass) {
        ok = false;
        if (failed.empty()) failed = std::string(kind) + " " + r.name;
      }
    }
  }
}

inline CriterionResult operator_identities(unsigned long seed = 1) {
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult res{1, "operator identities, 100 random pairs x 4 lattices x 2 backends", true, "", 0};
  Rng rng(seed);
  double worst_exact = 0, worst_big = 0;
  std::string failed;
  for (const char* kind : {"q=1/4", "q=4", "x=s^2", "x=s"}) {
    operator_identities_on<ExactScalar>(kind, rng, 100, res.pass, worst_exact, failed);
    PrecisionScope scope(128);
    operator_identities_on<BigScalar>(kind, rng, 100, res.pass, worst_big, failed);
  }
  res.seconds = elapsed(t0);
  if (res.seconds >= kOpsSeconds) res.pass = false;
  res.detail = "exact max residual " + fmt(worst_exact) + ", bigfloat max relative residual " + fmt(worst_big) +
               (failed.empty() ? "" : ", first failure " + failed);
  return res;
}

// --- 2: Leibniz -------------------------------------------------------------------

inline CriterionResult leibniz(unsigned long seed = 2) {
  auto t0 = std::chrono::steady_clock::now();
  using S = ExactScalar;
  CriterionResult res{2, "Leibniz formula n <= 5, deg f <= 4, moments 0..10; degree-2 form n <= 6 (exact)", true, "", 0};
  Rng rng(seed);
  int checks = 0;
  std::string failed;
  for (const char* kind : {"q=1/4", "q=4", "x=s^2", "x=s"}) {
    auto lat = lattice_of<S>(kind);
    for (int rep = 0; rep < 3; ++rep) {
      auto u = random_functional<S>(rng, 24);
      auto f = random_poly<S>(rng, 4);
      for (long n = 0; n <= 5; ++n) {
        auto r = verify_functional_identity(lat, FunctionalIdentity::leibniz, f, u, n, 10, 0);
        ++checks;
        if (!r.pass && failed.empty()) failed = std::string(kind) + " " + r.name;
        res.pass = res.pass && r.pass;
      }
      if (!lat.unit_base()) {
        std::vector<S> c{random_small<S>(rng), random_small<S>(rng), S(1)};
        Polynomial<S> f2(c);
        for (long n = 0; n <= 6; ++n) {
          auto r = verify_functional_identity(lat, FunctionalIdentity::leibniz_deg2, f2, u, n, 10, 0);
          ++checks;
          if (!r.pass && failed.empty()) failed = std::string(kind) + " " + r.name;
          res.pass = res.pass && r.pass;
        }
      }
    }
  }
  res.seconds = elapsed(t0);
  res.detail = std::to_string(checks) + " identity checks" + (failed.empty() ? ", all exact" : ", first failure " + failed);
  return res;
}

// --- 3: closed forms versus the moment oracle -------------------------------------

inline CriterionResult oracle_equivalence(unsigned long seed = 3) {
  auto t0 = std::chrono::steady_clock::now();
  using S = ExactScalar;
  CriterionResult res{3, "closed-form B_n, C_n equal the moment oracle, 20 pairs x 4 lattice kinds, n <= 10", true, "", 0};
  Rng rng(seed);
  int compared = 0;
  std::string failed;
  for (const char* kind : {"q=4", "q-linear", "x=s^2", "x=s"}) {
    auto lat = lattice_of<S>(kind);
    for (int i = 0; i < 20; ++i) {
      auto p = random_regular_pair(lat, rng, 10);
      auto closed = ttrr_from_pearson(lat, p, 10);
      auto oracle = oracle_ttrr_for_pair(lat, p, 10);
      bool same = compare_ttrr(closed, oracle, 10, 0).pass;
      ++compared;
      if (!same && failed.empty()) failed = kind;
      res.pass = res.pass && same;
    }
  }
  res.seconds = elapsed(t0);
  res.detail = std::to_string(compared) + " pairs compared exactly" + (failed.empty() ? "" : ", mismatch on " + failed);
  return res;
}

// --- 4: regularity biconditional ---------------------------------------------------

inline CriterionResult regularity_biconditional(unsigned long seed = 4) {
  auto t0 = std::chrono::steady_clock::now();
  using S = ExactScalar;
  CriterionResult res{4, "vanishing witness at level 2 gives a zero norm by level 3; 20 regular pairs give none to 10", true,
                      "", 0};
  Rng rng(seed);
  auto lat = lattice_of<S>("q=4");
  std::string detail;
  // engineered pair
  for (int attempt = 0; attempt < 50; ++attempt) {
    auto base = random_regular_pair(lat, rng, 3);
    auto p = engineer_witness_zero(lat, base, 2);
    auto rep = regularity(lat, p, 3);
    if (rep.verdict != Verdict::fails_witness || rep.failed_at != 2) continue;  // an earlier level broke as well
    auto level = oracle_failure_level(lat, p, 3);
    bool ok = level && *level <= 3;
    res.pass = res.pass && ok;
    detail = "engineered pair: oracle zero norm at level " + (level ? std::to_string(*level) : std::string("none"));
    break;
  }
  if (detail.empty()) {
    res.pass = false;
    detail = "could not engineer a pair failing exactly at level 2";
  }
  int clean = 0;
  for (int i = 0; i < 20; ++i) {
    auto p = random_regular_pair(lat, rng, 10);
    if (!oracle_failure_level(lat, p, 10)) ++clean;
  }
  res.pass = res.pass && clean == 20;
  res.seconds = elapsed(t0);
  res.detail = detail + "; regular pairs without zero norm: " + std::to_string(clean) + "/20";
  return res;
}

// --- 5: Rodrigues -----------------------------------------------------------------

inline CriterionResult rodrigues(unsigned long seed = 5) {
  auto t0 = std::chrono::steady_clock::now();
  using S = ExactScalar;
  CriterionResult res{5, "functional Rodrigues formula n <= 4, moments 0..10 (exact, q != 1 and q = 1)", true, "", 0};
  Rng rng(seed);
  int checks = 0;
  std::string failed;
  for (const char* kind : {"q=4", "q=1/4", "x=s^2", "x=s"}) {
    auto lat = lattice_of<S>(kind);
    for (int i = 0; i < 3; ++i) {
      auto p = random_regular_pair(lat, rng, 4);
      for (long n = 0; n <= 4; ++n) {
        auto r = rodrigues_verify(lat, p, n, 10, 0);
        ++checks;
        if (!r.pass && failed.empty()) failed = std::string(kind) + " n=" + std::to_string(n);
        res.pass = res.pass && r.pass;
      }
    }
  }
  res.seconds = elapsed(t0);
  res.detail = std::to_string(checks) + " moment-wise checks" + (failed.empty() ? ", residual 0" : ", first failure " + failed);
  return res;
}

// --- 6: raising relation on a q-quadratic lattice ------------------------------------

inline CriterionResult first_characterization() {
  auto t0 = std::chrono::steady_clock::now();
  using S = BigScalar;
  PrecisionScope scope(128);
  CriterionResult res{6, "solution built from C_1 via r: raising relation n <= 10, Askey-Wilson match, B_n = c3", true, "",
                      0};
  auto lat = Lattice<S>(from_rational<S>(mpq_class(1, 4)), {S(1), S(2), S(1) / S(3)});
  const S C1 = S(3) / S(10);
  auto sol = solve_first_characterization(lat, C1, 11);
  bool roundtrip = approx_eq(sol.C1_roundtrip, C1, kBigTol);
  bool b_const = true;
  for (const auto& b : sol.ttrr.B) b_const = b_const && approx_eq(b, lat.c3(), kBigTol);
  FamilySpec<S> aw{FamilyName::askey_wilson, first_characterization_aw_params(lat, sol.r), {}};
  auto cmp = compare_ttrr(family_ttrr(lat, aw, 10), sol.ttrr, 10, kBigTol);
  auto rel = check_structure(OpSequence<S>(lat, sol.ttrr, 11), Relation::sx_raise, 10, kBigTol);
  res.pass = roundtrip && b_const && cmp.pass && rel.pass();
  res.seconds = elapsed(t0);
  res.detail = std::string("raising relation ") +
               (rel.pass() ? "holds" : "fails at n=" + std::to_string(rel.first_failure) + " (residual " +
                                           fmt(rel.residuals[static_cast<std::size_t>(rel.first_failure)]) + ")") +
               "; Askey-Wilson max rel diff B " + fmt(cmp.max_rel_B) + ", C " + fmt(cmp.max_rel_C) +
               "; B_n = c3 " + (b_const ? "yes" : "no") + "; C_1 round trip " + (roundtrip ? "yes" : "no");
  return res;
}

// --- 7: lowering relation ------------------------------------------------------------

inline CriterionResult lowering() {
  auto t0 = std::chrono::steady_clock::now();
  using S = ExactScalar;
  CriterionResult res{7, "q-Hermite: lowering relation n <= 12 and the system; chebyshev_u: fails at n = 2, passes system",
                      true, "", 0};
  auto lat = lattice_of<S>("q=4");
  // q-Hermite data from the pair that the lowering relation forces
  const S c12 = lat.c1() * lat.c2();
  const S al = lat.alpha();
  const S C1 = (S(1) - lat.q()) * c12;
  const S C2 = S(2) * (S(2) * al * al - S(1)) * (C1 - c12) + S(2) * c12;
  auto pair = pearson_from_ttrr(lat, lat.c3(), lat.c3(), C1, C2, Relation::lower);
  auto qh = ttrr_from_pearson(lat, pair, 13);
  bool formula = true;
  for (long n = 0; n <= 13; ++n) {
    formula = formula && qh.B[static_cast<std::size_t>(n)] == lat.c3();
    formula = formula && qh.C[static_cast<std::size_t>(n + 1)] == (S(1) - pow_int(lat.q(), n + 1)) * c12;
  }
  auto qh_rel = check_structure(OpSequence<S>(lat, qh, 13), Relation::lower, 12, 0);
  auto qh_sys = check_system(lat, qh, 12, 0);
  auto cu = family_ttrr(lat, FamilySpec<S>{FamilyName::chebyshev_u, {}, {}}, 13);
  auto cu_rel = check_structure(OpSequence<S>(lat, cu, 13), Relation::lower, 12, 0);
  auto cu_sys = check_system(lat, cu, 12, 0);
  res.pass = formula && qh_rel.pass() && qh_sys.pass() && cu_rel.first_failure == 2 && cu_sys.pass();
  res.seconds = elapsed(t0);
  res.detail = std::string("q-Hermite C_{n+1} = (1-q^{n+1}) c1 c2: ") + (formula ? "yes" : "no") + ", lowering " +
               (qh_rel.pass() ? "holds" : "fails") + ", system " + (qh_sys.pass() ? "holds" : "fails") +
               "; chebyshev_u lowering first failure n=" + std::to_string(cu_rel.first_failure) + ", system " +
               (cu_sys.pass() ? "holds" : "fails");
  return res;
}

// --- 8: four-term relation -------------------------------------------------------------

inline CriterionResult four_term() {
  auto t0 = std::chrono::steady_clock::now();
  using S = BigScalar;
  PrecisionScope scope(192);
  CriterionResult res{8, "four-term relation for R_n(x; 1, -1, q^{1/4} | q^{1/2}), n <= 10, q in {1/4, 1/9}, 192 bits",
                      true, "", 0};
  std::string detail;
  for (int den : {4, 9}) {
    auto lat = standard_q_lattice(S(1) / S(den));
    auto rep = check_structure(OpSequence<S>(lat, four_term_family(lat, 11), 11), Relation::counterexample4term, 10, kBigTol);
    double worst = *std::max_element(rep.residuals.begin(), rep.residuals.end());
    res.pass = res.pass && rep.pass() && worst < kBigTol;
    detail += (detail.empty() ? "" : ", ") + std::string("q=1/") + std::to_string(den) + " max residual " + fmt(worst);
  }
  res.seconds = elapsed(t0);
  res.detail = detail;
  return res;
}

// --- 9: raising relation on q = 1 lattices ---------------------------------------------

inline CriterionResult unit_base_raising() {
  auto t0 = std::chrono::steady_clock::now();
  using S = ExactScalar;
  CriterionResult res{9, "Meixner image passes the raising relation on x = s (n <= 10); fails by n = 3 on x = s^2", true, "",
                      0};
  auto lin = check_meixner_linear(lattice_of<S>("x=s"), S(0), S(1) / S(3), 10, 0);
  auto quad = meixner_quadratic_contrast(lattice_of<S>("x=s^2"), S(0), S(1) / S(3), 10, 0);
  res.pass = lin.pass() && !quad.pass() && quad.first_failure <= 3;
  res.seconds = elapsed(t0);
  res.detail = std::string("linear lattice ") + (lin.pass() ? "holds" : "fails at n=" + std::to_string(lin.first_failure)) +
               "; quadratic lattice first failure n=" + std::to_string(quad.first_failure);
  return res;
}

// --- 10: asymptotics ---------------------------------------------------------------------

inline CriterionResult asymptotic_behaviour() {
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult res{10, "partial-sum identity n <= 64; q = 1/2 limits at n = 300; q = 1 limits at n = 10^4", true, "", 0};
  std::string detail;
  {
    using S = ExactScalar;
    auto lat = lattice_of<S>("q=1/4");
    auto p = PearsonPair<S>::from_coeffs(S(1), S(1) / S(3), S(-1) / S(2), S(2), S(-1) / S(2));
    auto a = asymptotics(lat, p, 64, kLimitTolQ);
    res.pass = res.pass && a.sn_pass;
    detail += std::string("partial sums exact through 64: ") + (a.sn_pass ? "yes" : "no");
  }
  {
    using S = BigScalar;
    PrecisionScope scope(128);
    auto lat = Lattice<S>(S(1) / S(2), {S(1), S(2), S(1) / S(3)});
    auto p = PearsonPair<S>::from_coeffs(S(1), S(1) / S(3), S(-1) / S(2), S(2), S(-1) / S(2));
    auto a = asymptotics(lat, p, 300, kLimitTolQ);
    res.pass = res.pass && a.pass();
    for (const auto& l : a.limits) detail += "; " + l.name + " err " + fmt(l.error);
  }
  {
    using S = BigScalar;
    PrecisionScope scope(128);
    auto lat = Lattice<S>(S(1), {S(1), S(1) / S(2), S(0)});
    for (bool a_zero : {false, true}) {
      auto p = PearsonPair<S>::from_coeffs(a_zero ? S(0) : S(1), S(1) / S(3), S(1), S(2), S(-1) / S(2));
      auto a = asymptotics(lat, p, 10000, kLimitTolUnit);
      res.pass = res.pass && a.pass();
      for (const auto& l : a.limits) detail += std::string("; ") + (a_zero ? "a=0 " : "") + l.name + " err " + fmt(l.error);
    }
  }
  res.seconds = elapsed(t0);
  if (res.seconds >= kAsymSeconds) res.pass = false;
  res.detail = detail;
  return res;
}

inline std::vector<std::function<CriterionResult()>> all_criteria() {
  return {[] { return operator_identities(); },  [] { return leibniz(); },
          [] { return oracle_equivalence(); },   [] { return regularity_biconditional(); },
          [] { return rodrigues(); },            [] { return first_characterization(); },
          [] { return lowering(); },             [] { return four_term(); },
          [] { return unit_base_raising(); },    [] { return asymptotic_behaviour(); }};
}

/// Runs one criterion, turning library errors into a failing verdict.
inline CriterionResult run_guarded(int id, const std::function<CriterionResult()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what(), 0};
  }
}

inline std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.title << " -- " << r.detail << " (" << fmt(r.seconds)
     << " s)";
  return os.str();
}

}  // namespace latticeops::battery

#endif  // LATTICEOPS_TOOLS_BATTERY_HPP
