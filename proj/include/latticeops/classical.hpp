#ifndef LATTICEOPS_CLASSICAL_HPP
#define LATTICEOPS_CLASSICAL_HPP

// Regularity of the functional equation D_x(phi u) = S_x(psi u): admissibility,
// iterated pairs (phi^[k], psi^[k]), closed-form recurrence coefficients on
// q != 1 and q = 1 lattices, the tower u^[k], the functional Rodrigues formula
// and the large-n behaviour of B_n, C_n.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latticeops/error.hpp"
#include "latticeops/functional.hpp"
#include "latticeops/lattice.hpp"
#include "latticeops/operators.hpp"
#include "latticeops/pair.hpp"

namespace latticeops {

template <Scalar S>
using PolyPair = std::pair<Polynomial<S>, Polynomial<S>>;  // (phi, psi)

// --- admissibility -----------------------------------------------------------

template <Scalar S>
struct AdmissibilityReport {
  std::vector<S> d;     // d_0 .. d_N
  long failed_at = -1;  // first n with d_n = 0, or -1
  bool admissible() const { return failed_at < 0; }
};

template <Scalar S>
bool negligible_against(const S& v, double eps, double scale) {
  return is_zero(v) || is_negligible(v, eps, scale);
}

/// d_n for n = 0..N; stops at the first vanishing one. Each d_n is also
/// recomputed in the form gamma_n phi''/2 + alpha_n psi' as a consistency check.
template <Scalar S>
AdmissibilityReport<S> admissibility(const Lattice<S>& lat, const PearsonPair<S>& pair, long N,
                                     double eps = kDefaultEps) {
  AdmissibilityReport<S> rep;
  const S phi2 = pair.phi().derivative().derivative()(S(0));
  const S psi1 = pair.psi().derivative()(S(0));
  for (long n = 0; n <= N; ++n) {
    S dn = pair_d(lat, pair, n);
    S alt = lat.gamma_n(n) * phi2 / S(2) + lat.alpha_n(n) * psi1;
    if (!approx_eq(dn, alt, eps)) throw ConsistencyFailure("d_n disagrees with gamma_n phi''/2 + alpha_n psi'");
    rep.d.push_back(dn);
    double scale = magnitude(pair.a() * lat.gamma_n(n)) + magnitude(pair.d() * lat.alpha_n(n));
    if (negligible_against(dn, eps, scale)) {
      rep.failed_at = n;
      break;
    }
  }
  return rep;
}

// --- iterated pairs ---------------------------------------------------------

/// phi^[k+1] = S phi^[k] + U1 S psi^[k] + alpha U2 D psi^[k],
/// psi^[k+1] = D phi^[k] + alpha S psi^[k] + U1 D psi^[k].
template <Scalar S>
PolyPair<S> iterated_pair_recursive(const Lattice<S>& lat, const PearsonPair<S>& pair, long k) {
  if (k < 0) throw InvalidInput("iterated pair index must be non-negative");
  Polynomial<S> phi = pair.phi(), psi = pair.psi();
  for (long j = 0; j < k; ++j) {
    Polynomial<S> sphi = sx(lat, phi), spsi = sx(lat, psi), dphi = dx(lat, phi), dpsi = dx(lat, psi);
    Polynomial<S> nphi = sphi + lat.u1() * spsi + lat.alpha() * (lat.u2() * dpsi);
    Polynomial<S> npsi = dphi + lat.alpha() * spsi + lat.u1() * dpsi;
    phi = std::move(nphi);
    psi = std::move(npsi);
  }
  return {phi, psi};
}

/// Closed forms of phi^[k], psi^[k].
template <Scalar S>
PolyPair<S> iterated_pair_closed(const Lattice<S>& lat, const PearsonPair<S>& pair, long k) {
  if (k < 0) throw InvalidInput("iterated pair index must be non-negative");
  const S a = pair.a(), b = pair.b(), c = pair.c(), d = pair.d(), e = pair.e();
  if (lat.unit_base()) {
    const S K(k);
    const S beta = lat.beta();
    const S dk = a * K + d;
    const S bk2 = beta * K * K;
    const S phi_at = pair.phi()(bk2), psi_at = pair.psi()(bk2);
    const S c5 = lat.c5(), c6 = lat.c6();
    Polynomial<S> phi({phi_at + S(2) * beta * K * psi_at - K / S(4) * (S(16) * beta * c6 - c5 * c5) * dk,
                       b + S(6) * beta * K * dk, a});
    const S d2k = a * S(2 * k) + d;
    Polynomial<S> psi({d2k * bk2 + pair_e(lat, pair, k), d2k});
    return {phi, psi};
  }
  const S& c3 = lat.c3();
  const S c12 = lat.c1() * lat.c2();
  const S a2 = lat.alpha() * lat.alpha() - S(1);
  const S dphi3 = pair.phi().derivative()(c3), psi3 = pair.psi()(c3), phi3 = pair.phi()(c3);
  const Polynomial<S> w = Polynomial<S>::linear_factor(c3);  // z - c3
  const S lead = d * a2 * lat.gamma_n(2 * k) + a * lat.alpha_n(2 * k);
  const S mid = dphi3 * lat.alpha_n(k) + psi3 * a2 * lat.gamma_n(k);
  Polynomial<S> phi = lead * (w * w - Polynomial<S>::constant(S(2) * c12)) + mid * w +
                      Polynomial<S>::constant(phi3 + S(2) * a * c12);
  Polynomial<S> psi = pair_d(lat, pair, 2 * k) * w + Polynomial<S>::constant(pair_e(lat, pair, k));
  (void)b;
  (void)c;
  (void)e;
  return {phi, psi};
}

/// Closed form, cross-checked against the recursion; throws ConsistencyFailure on disagreement.
template <Scalar S>
PolyPair<S> iterated_pair(const Lattice<S>& lat, const PearsonPair<S>& pair, long k, double eps = kDefaultEps) {
  auto closed = iterated_pair_closed(lat, pair, k);
  auto rec = iterated_pair_recursive(lat, pair, k);
  if (!approx_eq(closed.first, rec.first, eps) || !approx_eq(closed.second, rec.second, eps))
    throw ConsistencyFailure("iterated pair: recursion and closed form disagree at k=" + std::to_string(k));
  return closed;
}

// --- regularity ---------------------------------------------------------------

enum class Verdict { regular, fails_admissibility, fails_witness };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::regular: return "regular-up-to-N";
    case Verdict::fails_admissibility: return "fails-admissibility";
    case Verdict::fails_witness: return "fails-witness";
  }
  return "?";
}

template <Scalar S>
struct RegularityRecord {
  long n;
  S d_n, e_n;
  S point;    // where phi^[n] is evaluated
  S witness;  // phi^[n](point)
};

template <Scalar S>
struct RegularityReport {
  long N = 0;
  std::vector<S> d;  // d_0 .. d_{2N+1} (or up to the failing index)
  std::vector<RegularityRecord<S>> records;
  Verdict verdict = Verdict::regular;
  long failed_at = -1;
  bool regular() const { return verdict == Verdict::regular; }
};

/// Point at which phi^[n] is evaluated: c3 - e_n/d_{2n} (q != 1) or -beta n^2 - e_n/d_{2n} (q = 1).
template <Scalar S>
S witness_point(const Lattice<S>& lat, const PearsonPair<S>& pair, long n) {
  S base = lat.unit_base() ? S(0) - lat.beta() * S(n) * S(n) : lat.c3();
  return base - pair_e(lat, pair, n) / pair_d(lat, pair, 2 * n);
}

template <Scalar S>
S witness_value(const Lattice<S>& lat, const PearsonPair<S>& pair, long n) {
  return iterated_pair_closed(lat, pair, n).first(witness_point(lat, pair, n));
}

/// Regularity up to N: every d_k, k <= 2N+1, is nonzero (the closed forms for
/// C_{N+1} use d_{2N+1}) and every witness phi^[n](point_n), n <= N, is nonzero.
template <Scalar S>
RegularityReport<S> regularity(const Lattice<S>& lat, const PearsonPair<S>& pair, long N, double eps = kDefaultEps) {
  if (N < 0) throw InvalidInput("regularity needs N >= 0");
  RegularityReport<S> rep;
  rep.N = N;
  auto adm = admissibility(lat, pair, 2 * N + 1, eps);
  rep.d = adm.d;
  if (!adm.admissible()) {
    rep.verdict = Verdict::fails_admissibility;
    rep.failed_at = adm.failed_at;
    return rep;
  }
  for (long n = 0; n <= N; ++n) {
    auto [phin, psin] = iterated_pair_closed(lat, pair, n);
    S pt = witness_point(lat, pair, n);
    S w = phin(pt);
    rep.records.push_back({n, rep.d[static_cast<std::size_t>(n)], pair_e(lat, pair, n), pt, w});
    double scale = std::max(1.0, max_abs_coeff(phin));
    if (negligible_against(w, eps, scale)) {
      rep.verdict = Verdict::fails_witness;
      rep.failed_at = n;
      return rep;
    }
  }
  return rep;
}

/// Replaces the constant term c of phi so that the witness at level n vanishes.
/// The witness is affine in c with slope 1, so one correction step is exact.
template <Scalar S>
PearsonPair<S> engineer_witness_zero(const Lattice<S>& lat, const PearsonPair<S>& pair, long n) {
  S w = witness_value(lat, pair, n);
  return PearsonPair<S>::from_coeffs(pair.a(), pair.b(), pair.c() - w, pair.d(), pair.e());
}

// --- closed-form recurrence coefficients ------------------------------------

template <Scalar S>
S closed_form_B(const Lattice<S>& lat, const PearsonPair<S>& pair, long n) {
  const S gn = lat.gamma_n(n), gn1 = lat.gamma_n(n + 1);
  S base = lat.unit_base() ? S(0) - S(2) * lat.beta() * S(n) * S(n - 1) : lat.c3();
  // gamma_0 e_{-1}/d_{-2} is zero because gamma_0 = 0.
  S first = n == 0 ? S(0) : gn * pair_e(lat, pair, n - 1) / pair_d(lat, pair, 2 * n - 2);
  return base + first - gn1 * pair_e(lat, pair, n) / pair_d(lat, pair, 2 * n);
}

/// C_{n+1}. At n = 0 the factor d_{n-1}/d_{2n-1} is the ratio d_{-1}/d_{-1} = 1.
template <Scalar S>
S closed_form_C_next(const Lattice<S>& lat, const PearsonPair<S>& pair, long n) {
  S ratio = n == 0 ? S(1) : pair_d(lat, pair, n - 1) / pair_d(lat, pair, 2 * n - 1);
  return S(0) - lat.gamma_n(n + 1) * ratio / pair_d(lat, pair, 2 * n + 1) * witness_value(lat, pair, n);
}

/// B_0..B_N and C_1..C_{N+1} from the closed forms; the pair must be regular up to N.
template <Scalar S>
Ttrr<S> ttrr_from_pearson(const Lattice<S>& lat, const PearsonPair<S>& pair, long N, double eps = kDefaultEps) {
  auto rep = regularity(lat, pair, N, eps);
  if (rep.verdict == Verdict::fails_admissibility) throw AdmissibilityFailure(rep.failed_at);
  if (rep.verdict == Verdict::fails_witness) throw NotRegular(rep.failed_at + 1, "witness vanishes");
  Ttrr<S> t;
  t.C.push_back(S(0));
  for (long n = 0; n <= N; ++n) {
    t.B.push_back(closed_form_B(lat, pair, n));
    t.C.push_back(closed_form_C_next(lat, pair, n));
  }
  return t;
}

// --- u^[k] and Rodrigues --------------------------------------------------------

/// u^[0] = u, u^[j+1] = D_x(U2 psi^[j] u^[j]) - S_x(phi^[j] u^[j]).
template <Scalar S>
MomentFunctional<S> uk_functional(const Lattice<S>& lat, const PearsonPair<S>& pair, const MomentFunctional<S>& u,
                                  long k) {
  if (k < 0) throw InvalidInput("u^[k] needs k >= 0");
  MomentFunctional<S> cur = u;
  for (long j = 0; j < k; ++j) {
    auto [phij, psij] = iterated_pair_closed(lat, pair, j);
    auto first = dual_dx(lat, left_multiply(cur, lat.u2() * psij));
    auto second = dual_sx(lat, left_multiply(cur, phij));
    cur = first - second;
  }
  return cur;
}

/// k_n = (-alpha)^{-n} prod_{j=1}^n d_{n+j-2}^{-1}  (alpha = 1 when q = 1).
template <Scalar S>
S rodrigues_constant(const Lattice<S>& lat, const PearsonPair<S>& pair, long n) {
  S k = pow_int(S(0) - lat.alpha(), -n);
  for (long j = 1; j <= n; ++j) k = k / pair_d(lat, pair, n + j - 2);
  return k;
}

/// Moments 0..M of P_n u against k_n D_x^n u^[n], u the Pearson solution with mu_0 = 1.
template <Scalar S>
Residual rodrigues_verify(const Lattice<S>& lat, const PearsonPair<S>& pair, long n, long M,
                          double eps = kDefaultEps) {
  if (n < 0 || M < 0) throw InvalidInput("rodrigues_verify needs n, M >= 0");
  auto ttrr = ttrr_from_pearson(lat, pair, std::max(0L, n), eps);
  auto P = build_polys(ttrr, n);
  auto u = pearson_moments(lat, pair, S(1), M + 2 * n + 2, eps);
  auto lhs = left_multiply(u, P[static_cast<std::size_t>(n)], M);
  auto rhs = rodrigues_constant(lat, pair, n) * dual_dx_power(lat, uk_functional(lat, pair, u.truncated(M + 2 * n + 2), n), n);
  return compare_functionals("rodrigues[n=" + std::to_string(n) + "]", "P_n u = k_n D^n u^[n]", lhs, rhs, M, eps);
}

// --- oracle cross-check ---------------------------------------------------------

template <Scalar S>
struct TtrrComparison {
  double max_rel_B = 0;
  double max_rel_C = 0;
  bool pass = true;
};

template <Scalar S>
TtrrComparison<S> compare_ttrr(const Ttrr<S>& x, const Ttrr<S>& y, long N, double eps) {
  TtrrComparison<S> r;
  for (long n = 0; n <= N; ++n) {
    const auto i = static_cast<std::size_t>(n);
    if (i < x.B.size() && i < y.B.size()) {
      r.max_rel_B = std::max(r.max_rel_B, magnitude(x.B[i] - y.B[i]) / std::max(1.0, magnitude(y.B[i])));
      r.pass = r.pass && approx_eq(x.B[i], y.B[i], eps);
    } else {
      r.pass = false;
    }
    if (i + 1 < x.C.size() && i + 1 < y.C.size()) {
      r.max_rel_C =
          std::max(r.max_rel_C, magnitude(x.C[i + 1] - y.C[i + 1]) / std::max(1.0, magnitude(y.C[i + 1])));
      r.pass = r.pass && approx_eq(x.C[i + 1], y.C[i + 1], eps);
    } else {
      r.pass = false;
    }
  }
  return r;
}

/// Pearson moments followed by the quotient-recursion oracle. On the bigfloat
/// backend the moment problem loses bits roughly quadratically in N, so the
/// pipeline is rerun at doubling working precision until two successive runs
/// agree to eps; the agreed result is rounded back to the caller's precision.
template <Scalar S>
Ttrr<S> oracle_ttrr_for_pair(const Lattice<S>& lat, const PearsonPair<S>& pair, long N, double eps = kDefaultEps) {
  if constexpr (is_exact_v<S>) {
    return ttrr_oracle(pearson_moments(lat, pair, S(1), 2 * N + 2, eps), N, eps);
  } else {
    const long base = std::max(default_precision(), precision_of(lat.root()));
    auto run = [&](long bits) {
      PrecisionScope scope(bits);
      auto L = lat.with_precision(bits, 2 * N + 8);
      auto P = pair.with_precision(bits);
      double inner_eps = std::ldexp(1.0, -static_cast<int>(std::min(bits / 2, 1000L)));
      return ttrr_oracle(pearson_moments(L, P, S(1), 2 * N + 2, inner_eps), N, inner_eps);
    };
    long bits = base + 64;
    Ttrr<S> prev = run(bits);
    for (int round = 0; round < 8; ++round) {
      bits *= 2;
      Ttrr<S> next = run(bits);
      if (compare_ttrr(next, prev, N, eps * 1e-3).pass) {
        for (auto& v : next.B) v = with_precision(v, base);
        for (auto& v : next.C) v = with_precision(v, base);
        return next;
      }
      prev = std::move(next);
    }
    throw ConsistencyFailure("moment oracle did not stabilize with increasing precision");
  }
}

/// Level at which the moment oracle reports a vanishing norm, if any, up to level N+1.
template <Scalar S>
std::optional<long> oracle_failure_level(const Lattice<S>& lat, const PearsonPair<S>& pair, long N,
                                         double eps = kDefaultEps) {
  try {
    (void)oracle_ttrr_for_pair(lat, pair, N, eps);
    return std::nullopt;
  } catch (const NotRegular& e) {
    return e.level();
  } catch (const AdmissibilityFailure& e) {
    return e.index();
  }
}

// --- asymptotics ------------------------------------------------------------------

struct LimitCheck {
  std::string name;
  long n = 0;
  double estimate = 0;
  double limit = 0;
  double error = 0;
  double error_half = 0;  // same error at n/2, for a convergence-rate reading
  bool pass = true;
};

struct AsymptoticsReport {
  long sn_checked = 0;  // S_n identity checked for n = 0..sn_checked
  double sn_max_residual = 0;
  bool sn_pass = true;
  bool sn_applicable = false;
  std::vector<LimitCheck> limits;
  bool pass() const {
    bool ok = sn_pass;
    for (const auto& l : limits) ok = ok && l.pass;
    return ok;
  }
};

namespace detail {
template <Scalar S>
double real_part_double(const S& v) {
  return real_to_double(v.real());
}
}  // namespace detail

/// (i) S_n = sum_{j<n} (B_j - c3) = -gamma_n e_{n-1}/d_{2n-2}, n <= min(64, n_max), q != 1;
/// (ii) q != 1: scaled B_n - c3 and the partial sums against their limits at n_max;
/// (iii) q = 1: B_n/n^2 and C_{n+1}/n^4 at n_max against (-2 beta, beta^2) or, for a = 0,
/// (-8 beta, 16 beta^2). `tol` is the acceptance threshold for the limit checks;
/// a negative value selects 1e-6 on q != 1 lattices and 1e-2 on q = 1 lattices,
/// where the estimates converge only like 1/n.
template <Scalar S>
AsymptoticsReport asymptotics(const Lattice<S>& lat, const PearsonPair<S>& pair, long n_max, double tol = -1,
                              double eps = kDefaultEps) {
  if (n_max < 2) throw InvalidInput("asymptotics needs n_max >= 2");
  if (tol < 0) tol = lat.unit_base() ? 1e-2 : 1e-6;
  AsymptoticsReport rep;
  if (!lat.unit_base()) {
    rep.sn_applicable = true;
    const long top = std::min(64L, n_max);
    S partial(0);
    for (long n = 0; n <= top; ++n) {
      S identity = n == 0 ? S(0) : S(0) - lat.gamma_n(n) * pair_e(lat, pair, n - 1) / pair_d(lat, pair, 2 * n - 2);
      rep.sn_max_residual = std::max(rep.sn_max_residual, magnitude(partial - identity));
      rep.sn_pass = rep.sn_pass && approx_eq(partial, identity, eps);
      partial = partial + (closed_form_B(lat, pair, n) - lat.c3());
    }
    rep.sn_checked = top;

    const S& q = lat.q();
    const double log2q = std::abs(std::log2(real_to_double(q.real())));
    const bool small_q = magnitude(q) < 1.0;
    auto evaluate = [&](long n) {
      // Returns (scaled B_n - c3, partial sum to n, limit of the first, limit of the second).
      auto body = [&](const Lattice<S>& L, const PearsonPair<S>& P) {
        const S t = L.root();
        const S u = S(1) / (t - S(1) / t);
        const S c3 = L.c3();
        const S psi3 = P.psi()(c3), dphi3 = P.phi().derivative()(c3);
        const S a = P.a(), d = P.d(), alpha = L.alpha();
        const S sgn = small_q ? S(-1) : S(1);
        const S den = d + sgn * S(2) * a * u;
        if (is_zero(den)) throw InvalidInput("asymptotics: d -+ 2au vanishes for this branch");
        S lim_b = (psi3 - S(4) * alpha * u * u * dphi3) / (u * den);
        S lim_s;
        S scaled;
        S qn = pow_int(L.q(), n);
        if (small_q) {
          lim_b = S(0) - lim_b / t;
          lim_s = (psi3 - S(2) * u * dphi3) / ((L.q() - S(1)) * den);
          scaled = (closed_form_B(L, P, n) - c3) / qn;
        } else {
          lim_b = lim_b * t;
          lim_s = (psi3 + S(2) * u * dphi3) / ((S(1) / L.q() - S(1)) * den);
          scaled = (closed_form_B(L, P, n) - c3) * qn;
        }
        S sum(0);
        for (long j = 0; j < n; ++j) sum = sum + (closed_form_B(L, P, j) - c3);
        return std::array<double, 4>{detail::real_part_double(scaled), detail::real_part_double(sum),
                                     detail::real_part_double(lim_b), detail::real_part_double(lim_s)};
      };
      if constexpr (is_exact_v<S>) {
        return body(lat, pair);
      } else {
        const long bits = std::max(default_precision(), precision_of(lat.root())) +
                          static_cast<long>(std::ceil(static_cast<double>(n) * log2q)) + 64;
        PrecisionScope scope(bits);
        return body(lat.with_precision(bits, 8), pair.with_precision(bits));
      }
    };
    auto full = evaluate(n_max);
    auto half = evaluate(n_max / 2);
    LimitCheck b{small_q ? "q^-n (B_n - c3)" : "q^n (B_n - c3)", n_max, full[0], full[2],
                 std::abs(full[0] - full[2]), std::abs(half[0] - half[2]), true};
    b.pass = b.error < tol;
    LimitCheck s{"sum_{j<n} (B_j - c3)", n_max, full[1], full[3], std::abs(full[1] - full[3]),
                 std::abs(half[1] - half[3]), true};
    s.pass = s.error < tol;
    rep.limits = {b, s};
    return rep;
  }

  if (is_zero(lat.beta())) throw InvalidInput("asymptotics on a q = 1 lattice needs beta != 0");
  const bool a_zero = is_zero(pair.a());
  const double beta = detail::real_part_double(lat.beta());
  const double lim_b = a_zero ? -8 * beta : -2 * beta;
  const double lim_c = a_zero ? 16 * beta * beta : beta * beta;
  auto evaluate = [&](long n) {
    S N(n);
    S bn = closed_form_B(lat, pair, n) / (N * N);
    S cn = closed_form_C_next(lat, pair, n) / (N * N * N * N);
    return std::pair<double, double>{detail::real_part_double(bn), detail::real_part_double(cn)};
  };
  auto full = evaluate(n_max);
  auto half = evaluate(n_max / 2);
  LimitCheck b{"B_n / n^2", n_max, full.first, lim_b, std::abs(full.first - lim_b), std::abs(half.first - lim_b), true};
  b.pass = b.error < tol;
  LimitCheck c{"C_{n+1} / n^4", n_max, full.second, lim_c, std::abs(full.second - lim_c),
               std::abs(half.second - lim_c), true};
  c.pass = c.error < tol;
  rep.limits = {b, c};
  return rep;
}

}  // namespace latticeops

#endif  // LATTICEOPS_CLASSICAL_HPP
