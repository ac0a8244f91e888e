#ifndef LATTICEOPS_FAMILIES_HPP
#define LATTICEOPS_FAMILIES_HPP

// Recurrence data of named orthogonal polynomial families.
//
// The basic hypergeometric families live on x(s) = (q^{-s} + q^s)/2 by
// default; on a general q-quadratic lattice their data is carried over by the
// affine change z -> lambda z + c3 with lambda^2 = 4 c1 c2.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "latticeops/error.hpp"
#include "latticeops/functional.hpp"
#include "latticeops/lattice.hpp"

namespace latticeops {

enum class FamilyName { askey_wilson, meixner2, al_salam, cdq_hahn, q_hermite, chebyshev_u };

inline const char* family_name(FamilyName f) {
  switch (f) {
    case FamilyName::askey_wilson: return "askey_wilson";
    case FamilyName::meixner2: return "meixner2";
    case FamilyName::al_salam: return "al_salam";
    case FamilyName::cdq_hahn: return "cdq_hahn";
    case FamilyName::q_hermite: return "q_hermite";
    case FamilyName::chebyshev_u: return "chebyshev_u";
  }
  return "?";
}

inline FamilyName parse_family(const std::string& s) {
  for (auto f : {FamilyName::askey_wilson, FamilyName::meixner2, FamilyName::al_salam, FamilyName::cdq_hahn,
                 FamilyName::q_hermite, FamilyName::chebyshev_u})
    if (s == family_name(f)) return f;
  throw InvalidInput("unknown family '" + s + "'");
}

/// Number of parameters each family takes.
inline std::size_t family_arity(FamilyName f) {
  switch (f) {
    case FamilyName::askey_wilson: return 4;
    case FamilyName::meixner2: return 2;
    case FamilyName::al_salam: return 2;
    case FamilyName::cdq_hahn: return 3;
    case FamilyName::q_hermite: return 0;
    case FamilyName::chebyshev_u: return 0;
  }
  return 0;
}

inline bool family_uses_base(FamilyName f) {
  return f == FamilyName::askey_wilson || f == FamilyName::al_salam || f == FamilyName::cdq_hahn ||
         f == FamilyName::q_hermite;
}

template <Scalar S>
struct FamilySpec {
  FamilyName name;
  std::vector<S> params;
  std::optional<S> base;  // base of the family; defaults to the lattice's q
};

namespace detail {

template <Scalar S>
S nonzero_or_throw(const S& v, const std::string& what, long n) {
  if (is_zero(v)) throw InvalidInput(what + " vanishes at n=" + std::to_string(n));
  return v;
}

template <Scalar S>
bool is_nonpositive_integer(const S& v) {
  if (!v.is_real()) return false;
  const double r = real_to_double(v.real());
  const double k = std::round(r);
  return k <= 0 && std::abs(r - k) < 0.5 && approx_eq(v, S(static_cast<long>(k)));
}

// Askey-Wilson on the standard lattice, parameters a1..a4, base q.
template <Scalar S>
void askey_wilson(const std::vector<S>& p, const S& q, long N, Ttrr<S>& t) {
  const S &a1 = p[0], &a2 = p[1], &a3 = p[2], &a4 = p[3];
  const S A = a1 * a2 * a3 * a4;
  const S one(1);
  // restrictions for every n the data touches
  for (long n = 0; n <= N + 1; ++n) {
    S qn = pow_int(q, n);
    for (const S& prod : {A, a1 * a2, a1 * a3, a1 * a4, a2 * a3, a2 * a4, a3 * a4})
      nonzero_or_throw(one - prod * qn, "an Askey-Wilson restriction factor", n);
  }
  for (long n = 0; n <= N; ++n) {
    const S qn = pow_int(q, n);
    const S den1 = nonzero_or_throw(one - A * pow_int(q, 2 * n - 1), "1 - a1a2a3a4 q^{2n-1}", n);
    const S den0 = nonzero_or_throw(one - A * pow_int(q, 2 * n), "1 - a1a2a3a4 q^{2n}", n);
    const S den2 = nonzero_or_throw(one - A * pow_int(q, 2 * n + 1), "1 - a1a2a3a4 q^{2n+1}", n);
    const S qm1 = pow_int(q, n - 1);
    S an = (one - a1 * a2 * qn) * (one - a1 * a3 * qn) * (one - a1 * a4 * qn) * (one - A * qm1) / (a1 * den1 * den0);
    S cn(0);
    if (n > 0) {
      const S denm = nonzero_or_throw(one - A * pow_int(q, 2 * n - 2), "1 - a1a2a3a4 q^{2n-2}", n);
      cn = a1 * (one - qn) * (one - a2 * a3 * qm1) * (one - a2 * a4 * qm1) * (one - a3 * a4 * qm1) / (den1 * denm);
    }
    t.B.push_back((a1 + one / a1 - an - cn) / S(2));
    S c = (one - q * qn) * (one - A * qm1) * (one - a1 * a2 * qn) * (one - a1 * a3 * qn) * (one - a1 * a4 * qn) *
          (one - a2 * a3 * qn) * (one - a2 * a4 * qn) * (one - a3 * a4 * qn) / (S(4) * den1 * den0 * den0 * den2);
    t.C.push_back(c);
  }
}

}  // namespace detail

/// B_0..B_N and C_0 = 0, C_1..C_{N+1} of the family, carried onto `lat`.
template <Scalar S>
Ttrr<S> family_ttrr(const Lattice<S>& lat, const FamilySpec<S>& spec, long N) {
  if (N < 0) throw InvalidInput("family_ttrr needs N >= 0");
  if (spec.params.size() != family_arity(spec.name))
    throw InvalidInput(std::string(family_name(spec.name)) + " takes " + std::to_string(family_arity(spec.name)) +
                       " parameters");
  const auto& p = spec.params;
  Ttrr<S> t;
  t.C.push_back(S(0));
  const S one(1), four(4);

  if (spec.name == FamilyName::meixner2) {
    const S &b1 = p[0], &b2 = p[1];
    if (b1 * b1 == S(-1)) throw InvalidInput("meixner2 needs b1^2 != -1");
    if (detail::is_nonpositive_integer(b2)) throw InvalidInput("meixner2 needs b2 not in {0, -1, -2, ...}");
    for (long n = 0; n <= N; ++n) {
      const S n_(n);
      t.B.push_back(S(0) - b1 * (S(2) * n_ + b2));
      t.C.push_back(detail::nonzero_or_throw((b1 * b1 + one) * (n_ + one) * (n_ + b2), "meixner2 C_{n+1}", n + 1));
    }
    return t;
  }
  if (spec.name == FamilyName::chebyshev_u) {
    if (lat.kind() != LatticeKind::q_quadratic) throw InvalidInput("chebyshev_u needs a q-quadratic lattice");
    for (long n = 0; n <= N; ++n) {
      t.B.push_back(lat.c3());
      t.C.push_back(lat.c1() * lat.c2());
    }
    return t;
  }

  if (lat.kind() != LatticeKind::q_quadratic)
    throw InvalidInput(std::string(family_name(spec.name)) + " needs a q-quadratic lattice");
  const S q = spec.base ? *spec.base : lat.q();
  if (!q.is_real() || real_sign(q) <= 0 || q == one) throw InvalidInput("family base must be a positive real != 1");

  switch (spec.name) {
    case FamilyName::askey_wilson: detail::askey_wilson(p, q, N, t); break;
    case FamilyName::al_salam:
    case FamilyName::q_hermite: {
      const S a = p.empty() ? S(0) : p[0], b = p.empty() ? S(0) : p[1];
      for (long n = 0; n <= N; ++n) {
        const S qn = pow_int(q, n);
        t.B.push_back((a + b) * qn / S(2));
        t.C.push_back(detail::nonzero_or_throw((one - a * b * qn) * (one - q * qn) / four, "C_{n+1}", n + 1));
      }
      break;
    }
    case FamilyName::cdq_hahn: {
      const S &a = p[0], &b = p[1], &c = p[2];
      if (is_zero(a)) throw InvalidInput("cdq_hahn needs a != 0");
      for (long n = 0; n <= N; ++n) {
        const S qn = pow_int(q, n), qm1 = pow_int(q, n - 1);
        t.B.push_back((a + one / a - a * (one - qn) * (one - b * c * qm1) - (one - a * b * qn) * (one - a * c * qn) / a) /
                      S(2));
        t.C.push_back(detail::nonzero_or_throw(
            (one - a * b * qn) * (one - a * c * qn) * (one - b * c * qn) * (one - q * qn) / four, "C_{n+1}", n + 1));
      }
      break;
    }
    default: break;
  }

  // z -> lambda z + c3 with lambda^2 = 4 c1 c2; lambda itself only when some B_n != 0.
  const S lambda2 = four * lat.c1() * lat.c2();
  bool any_b = false;
  for (const auto& b : t.B) any_b = any_b || !is_zero(b);
  if (any_b) {
    const S lambda = require_sqrt(lambda2, "4 c1 c2 (affine map of the family data)");
    for (auto& b : t.B) b = lambda * b + lat.c3();
  } else {
    for (auto& b : t.B) b = lat.c3();
  }
  for (std::size_t i = 1; i < t.C.size(); ++i) t.C[i] = lambda2 * t.C[i];
  return t;
}

/// Monic P_0..P_N from recurrence data, bundled with the lattice.
template <Scalar S>
OpSequence<S> build_ops(const Lattice<S>& lat, const Ttrr<S>& ttrr, long N) {
  return OpSequence<S>(lat, ttrr, N);
}

}  // namespace latticeops

#endif  // LATTICEOPS_FAMILIES_HPP
