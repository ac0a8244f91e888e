#ifndef LATTICEOPS_FUNCTIONAL_HPP
#define LATTICEOPS_FUNCTIONAL_HPP

// Linear functionals on polynomials, represented by their moments
// mu_n = <u, z^n>, together with the dual operators, Pearson moment
// generation and the moment-based recurrence oracle.

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "latticeops/error.hpp"
#include "latticeops/lattice.hpp"
#include "latticeops/operators.hpp"
#include "latticeops/pair.hpp"
#include "latticeops/polynomial.hpp"

namespace latticeops {

template <Scalar S>
class MomentFunctional {
 public:
  /// Appends moments to `mu` until it holds indices 0..upto.
  using Extender = std::function<void(std::vector<S>& mu, std::size_t upto)>;

  MomentFunctional() = default;
  explicit MomentFunctional(std::vector<S> mu, Extender extend = {}, std::string provenance = {})
      : mu_(std::make_shared<std::vector<S>>(std::move(mu))),
        extend_(extend ? std::make_shared<Extender>(std::move(extend)) : nullptr),
        provenance_(std::move(provenance)) {}

  /// Highest moment index currently stored (-1 when empty).
  long horizon() const { return static_cast<long>(mu_ ? mu_->size() : 0) - 1; }
  bool extensible() const { return extend_ != nullptr; }
  const std::string& provenance() const { return provenance_; }

  /// Makes moments 0..m available, extending through the provenance if needed.
  /// Extension only appends; stored entries never change.
  void ensure(long m) const {
    if (m <= horizon()) return;
    if (!extend_) throw HorizonExhausted(static_cast<std::size_t>(m), static_cast<std::size_t>(std::max(0L, horizon())));
    (*extend_)(*mu_, static_cast<std::size_t>(m));
  }

  const S& operator[](long n) const {
    ensure(n);
    return (*mu_)[static_cast<std::size_t>(n)];
  }
  const std::vector<S>& moments() const {
    static const std::vector<S> empty;
    return mu_ ? *mu_ : empty;
  }

  /// Copy limited to moments 0..m, without provenance.
  MomentFunctional truncated(long m) const {
    ensure(m);
    return MomentFunctional(std::vector<S>(mu_->begin(), mu_->begin() + m + 1));
  }

 private:
  std::shared_ptr<std::vector<S>> mu_;
  std::shared_ptr<Extender> extend_;
  std::string provenance_;
};

template <Scalar S>
MomentFunctional<S> functional_from(std::vector<S> mu) {
  return MomentFunctional<S>(std::move(mu));
}

/// <u, f>
template <Scalar S>
S apply(const MomentFunctional<S>& u, const Polynomial<S>& f) {
  if (f.is_zero()) return S(0);
  u.ensure(f.degree());
  S r(0);
  for (long k = 0; k <= f.degree(); ++k) r = r + f.coeff(k) * u[k];
  return r;
}

namespace detail {
inline long resolve_horizon(long natural, long requested) { return requested < 0 ? natural : requested; }
}  // namespace detail

/// f u, defined by <f u, g> = <u, f g>. Natural horizon: M - deg f.
template <Scalar S>
MomentFunctional<S> left_multiply(const MomentFunctional<S>& u, const Polynomial<S>& f, long horizon = -1) {
  const long deg = std::max(0L, f.degree());
  const long H = detail::resolve_horizon(u.horizon() - deg, horizon);
  if (H < 0) throw HorizonExhausted(static_cast<std::size_t>(deg), static_cast<std::size_t>(std::max(0L, u.horizon())));
  u.ensure(H + deg);
  std::vector<S> out;
  out.reserve(static_cast<std::size_t>(H + 1));
  for (long n = 0; n <= H; ++n) {
    S r(0);
    for (long k = 0; k <= f.degree(); ++k) r = r + f.coeff(k) * u[n + k];
    out.push_back(r);
  }
  return MomentFunctional<S>(std::move(out));
}

/// <D_x u, f> = -<u, D_x f>. Natural horizon: M + 1.
template <Scalar S>
MomentFunctional<S> dual_dx(const Lattice<S>& lat, const MomentFunctional<S>& u, long horizon = -1) {
  const long H = detail::resolve_horizon(u.horizon() + 1, horizon);
  u.ensure(H - 1);
  std::vector<S> out;
  out.reserve(static_cast<std::size_t>(H + 1));
  for (long n = 0; n <= H; ++n) out.push_back(-apply(u, monomial_image(lat, static_cast<std::size_t>(n), true)));
  return MomentFunctional<S>(std::move(out));
}

/// <S_x u, f> = <u, S_x f>. Natural horizon: M.
template <Scalar S>
MomentFunctional<S> dual_sx(const Lattice<S>& lat, const MomentFunctional<S>& u, long horizon = -1) {
  const long H = detail::resolve_horizon(u.horizon(), horizon);
  u.ensure(H);
  std::vector<S> out;
  out.reserve(static_cast<std::size_t>(H + 1));
  for (long n = 0; n <= H; ++n) out.push_back(apply(u, monomial_image(lat, static_cast<std::size_t>(n), false)));
  return MomentFunctional<S>(std::move(out));
}

template <Scalar S>
MomentFunctional<S> dual_dx_power(const Lattice<S>& lat, MomentFunctional<S> u, long n) {
  for (long i = 0; i < n; ++i) u = dual_dx(lat, u);
  return u;
}

template <Scalar S>
MomentFunctional<S> dual_sx_power(const Lattice<S>& lat, MomentFunctional<S> u, long n) {
  for (long i = 0; i < n; ++i) u = dual_sx(lat, u);
  return u;
}

/// Linear combination on the common horizon.
template <Scalar S>
MomentFunctional<S> combine(const S& a, const MomentFunctional<S>& u, const S& b, const MomentFunctional<S>& v) {
  const long H = std::min(u.horizon(), v.horizon());
  std::vector<S> out;
  for (long n = 0; n <= H; ++n) out.push_back(a * u[n] + b * v[n]);
  return MomentFunctional<S>(std::move(out));
}

template <Scalar S>
MomentFunctional<S> operator+(const MomentFunctional<S>& u, const MomentFunctional<S>& v) {
  return combine(S(1), u, S(1), v);
}
template <Scalar S>
MomentFunctional<S> operator-(const MomentFunctional<S>& u, const MomentFunctional<S>& v) {
  return combine(S(1), u, S(-1), v);
}
template <Scalar S>
MomentFunctional<S> operator*(const S& k, const MomentFunctional<S>& u) {
  std::vector<S> out;
  for (long n = 0; n <= u.horizon(); ++n) out.push_back(k * u[n]);
  return MomentFunctional<S>(std::move(out));
}

enum class Transform { leftmul, dual_dx, dual_sx };

/// Uniform entry point for the three functional transforms.
template <Scalar S>
MomentFunctional<S> transform(const MomentFunctional<S>& u, Transform which, const Lattice<S>& lat,
                              const Polynomial<S>& f = {}, long horizon = -1) {
  switch (which) {
    case Transform::leftmul: return left_multiply(u, f, horizon);
    case Transform::dual_dx: return dual_dx(lat, u, horizon);
    case Transform::dual_sx: return dual_sx(lat, u, horizon);
  }
  throw InvalidInput("unknown transform");
}

// ---------------------------------------------------------------------------
// Pearson moments

namespace detail {
template <Scalar S>
bool vanishes(const S& v, double eps, double scale) {
  return is_negligible(v, eps, scale);
}
}  // namespace detail

/// Moments of the solution of D_x(phi u) = S_x(psi u) with <u, 1> = mu0.
/// Pairing with z^n gives <u, phi D_x z^n + psi S_x z^n> = 0, whose top
/// coefficient is d_n, so mu_{n+1} is determined whenever d_n != 0.
/// The returned functional extends itself on demand.
template <Scalar S>
MomentFunctional<S> pearson_moments(const Lattice<S>& lat, const PearsonPair<S>& pair, const S& mu0, long N,
                                    double eps = kDefaultEps) {
  auto step = [lat, pair, eps](std::vector<S>& mu, std::size_t upto) {
    while (mu.size() <= upto) {
      const long n = static_cast<long>(mu.size()) - 1;
      Polynomial<S> p = pair.phi() * monomial_image(lat, static_cast<std::size_t>(n), true) +
                        pair.psi() * monomial_image(lat, static_cast<std::size_t>(n), false);
      const S dn = p.coeff(n + 1);
      double scale = magnitude(pair.a() * lat.gamma_n(n)) + magnitude(pair.d() * lat.alpha_n(n));
      if (is_zero(dn) || detail::vanishes(dn, eps, scale)) throw AdmissibilityFailure(n);
      S acc(0);
      for (long k = 0; k <= n; ++k) acc = acc + p.coeff(k) * mu[static_cast<std::size_t>(k)];
      mu.push_back(-acc / dn);
    }
  };
  std::vector<S> mu{mu0};
  step(mu, static_cast<std::size_t>(std::max(0L, N)));
  return MomentFunctional<S>(std::move(mu), step, "pearson");
}

// ---------------------------------------------------------------------------
// Recurrence coefficients

/// B_n, C_n of P_{n+1} = (z - B_n) P_n - C_n P_{n-1}; C[0] = 0 by convention.
template <Scalar S>
struct Ttrr {
  std::vector<S> B;  // B_0, B_1, ...
  std::vector<S> C;  // C_0 = 0, C_1, ...
  long size() const { return static_cast<long>(B.size()); }
};

/// Monic P_0..P_N from recurrence data.
template <Scalar S>
std::vector<Polynomial<S>> build_polys(const Ttrr<S>& t, long N) {
  if (N < 0) throw InvalidInput("build_polys needs N >= 0");
  if (t.size() < N || static_cast<long>(t.C.size()) < N) throw InvalidInput("not enough recurrence coefficients");
  std::vector<Polynomial<S>> P{Polynomial<S>::constant(S(1))};
  for (long n = 0; n < N; ++n) {
    const auto idx = static_cast<std::size_t>(n);
    Polynomial<S> next = Polynomial<S>::linear_factor(t.B[idx]) * P[idx];
    if (n >= 1) {
      if (is_zero(t.C[idx])) throw NotRegular(n, "C_n = 0");
      next = next - t.C[idx] * P[idx - 1];
    }
    P.push_back(std::move(next));
  }
  return P;
}

/// Lattice, recurrence data and the cached monic polynomials they generate.
template <Scalar S>
class OpSequence {
 public:
  OpSequence(Lattice<S> lat, Ttrr<S> ttrr, long N)
      : lat_(std::move(lat)), ttrr_(std::move(ttrr)), P_(build_polys(ttrr_, N)) {}

  const Lattice<S>& lattice() const { return lat_; }
  const Ttrr<S>& ttrr() const { return ttrr_; }
  long size() const { return static_cast<long>(P_.size()) - 1; }
  const Polynomial<S>& operator[](long n) const {
    if (n < 0 || n > size()) throw InvalidInput("polynomial index out of range");
    return P_[static_cast<std::size_t>(n)];
  }
  /// P_n^[k] = D_x^k P_{n+k} / (gamma_{n+1} ... gamma_{n+k}), monic of degree n.
  Polynomial<S> derived(long k, long n) const {
    S norm(1);
    for (long j = 1; j <= k; ++j) norm = norm * lat_.gamma_n(n + j);
    return (S(1) / norm) * dx_power(lat_, (*this)[n + k], k);
  }

 private:
  Lattice<S> lat_;
  Ttrr<S> ttrr_;
  std::vector<Polynomial<S>> P_;
};

namespace detail {
/// <u, f> together with the size of the terms summed (for cancellation-aware zero tests).
template <Scalar S>
std::pair<S, double> apply_with_scale(const MomentFunctional<S>& u, const Polynomial<S>& f) {
  S r(0);
  double scale = 0;
  for (long k = 0; k <= f.degree(); ++k) {
    S term = f.coeff(k) * u[k];
    scale += magnitude(term);
    r = r + term;
  }
  return {r, scale};
}
}  // namespace detail

/// B_n = <u, z P_n^2>/<u, P_n^2>, C_n = <u, P_n^2>/<u, P_{n-1}^2>, by the
/// quotient recursion. Produces B_0..B_N and C_1..C_{N+1} (the last one only
/// when moment 2N+2 is available). Throws NotRegular(n) when <u, P_n^2> = 0.
template <Scalar S>
Ttrr<S> ttrr_oracle(const MomentFunctional<S>& u, long N, double eps = kDefaultEps) {
  if (N < 0) throw InvalidInput("ttrr_oracle needs N >= 0");
  u.ensure(2 * N + 1);
  bool last_c = u.extensible() || u.horizon() >= 2 * N + 2;
  Ttrr<S> t;
  t.C.push_back(S(0));
  const Polynomial<S> z = Polynomial<S>::monomial(1);
  Polynomial<S> prev, cur = Polynomial<S>::constant(S(1));
  S h_prev(0);
  for (long n = 0; n <= N + 1; ++n) {
    if (n == N + 1 && !last_c) break;
    Polynomial<S> sq = cur * cur;
    auto [h, scale] = detail::apply_with_scale(u, sq);
    if (is_zero(h) || is_negligible(h, eps, scale)) throw NotRegular(n, "<u, P_n^2> = 0");
    if (n >= 1) t.C.push_back(h / h_prev);
    if (n == N + 1) break;
    S Bn = apply(u, z * sq) / h;
    t.B.push_back(Bn);
    Polynomial<S> next = Polynomial<S>::linear_factor(Bn) * cur;
    if (n >= 1) next = next - t.C.back() * prev;
    prev = std::move(cur);
    cur = std::move(next);
    h_prev = h;
  }
  return t;
}

/// Hankel determinants Delta_0 = 1, Delta_n = det(mu_{i+j})_{0<=i,j<n}, n <= N.
template <Scalar S>
std::vector<S> hankel_determinants(const MomentFunctional<S>& u, long N) {
  if (N < 0) throw InvalidInput("hankel_determinants needs N >= 0");
  u.ensure(2 * N - 2 < 0 ? 0 : 2 * N - 2);
  std::vector<S> out{S(1)};
  for (long n = 1; n <= N; ++n) {
    std::vector<std::vector<S>> m(static_cast<std::size_t>(n), std::vector<S>(static_cast<std::size_t>(n)));
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) m[i][j] = u[i + j];
    S det(1);
    for (long col = 0; col < n; ++col) {
      long piv = -1;
      double best = -1;
      for (long r = col; r < n; ++r) {
        if (is_zero(m[r][col])) continue;
        double mag = magnitude(m[r][col]);
        if constexpr (is_exact_v<S>) {
          piv = r;
          break;
        } else if (mag > best) {
          best = mag;
          piv = r;
        }
      }
      if (piv < 0) {
        det = S(0);
        break;
      }
      if (piv != col) {
        std::swap(m[piv], m[col]);
        det = -det;
      }
      det = det * m[col][col];
      for (long r = col + 1; r < n; ++r) {
        if (is_zero(m[r][col])) continue;
        S f = m[r][col] / m[col][col];
        for (long c = col; c < n; ++c) m[r][c] = m[r][c] - f * m[col][c];
      }
    }
    out.push_back(det);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Functional identities

enum class FunctionalIdentity { dual_product_dx, dual_product_sx, dual_dxn_sx, leibniz, leibniz_deg2 };

inline const char* identity_name(FunctionalIdentity id) {
  switch (id) {
    case FunctionalIdentity::dual_product_dx: return "dual_product_dx";
    case FunctionalIdentity::dual_product_sx: return "dual_product_sx";
    case FunctionalIdentity::dual_dxn_sx: return "dual_dxn_sx";
    case FunctionalIdentity::leibniz: return "leibniz";
    case FunctionalIdentity::leibniz_deg2: return "leibniz_deg2";
  }
  return "?";
}

inline FunctionalIdentity parse_functional_identity(const std::string& s) {
  for (auto id : {FunctionalIdentity::dual_product_dx, FunctionalIdentity::dual_product_sx,
                  FunctionalIdentity::dual_dxn_sx, FunctionalIdentity::leibniz, FunctionalIdentity::leibniz_deg2})
    if (s == identity_name(id)) return id;
  throw InvalidInput("unknown functional identity '" + s + "'");
}

inline const char* identity_statement(FunctionalIdentity id) {
  switch (id) {
    case FunctionalIdentity::dual_product_dx: return "D(fu) = (Sf - U1 Df/alpha) Du + (Df/alpha) Su";
    case FunctionalIdentity::dual_product_sx:
      return "S(fu) = (alpha U2 - U1^2/alpha) Df Du + (Sf + U1 Df/alpha) Su";
    case FunctionalIdentity::dual_dxn_sx: return "alpha D^n S u = alpha_{n+1} S D^n u + gamma_n U1 D^{n+1} u";
    case FunctionalIdentity::leibniz: return "D^n(fu) = sum_k T_{n,k}f D^{n-k} S^k u";
    case FunctionalIdentity::leibniz_deg2: return "D^n(fu) for deg f <= 2, explicit three-term form";
  }
  return "";
}

template <Scalar S>
Residual compare_functionals(std::string name, std::string statement, const MomentFunctional<S>& lhs,
                             const MomentFunctional<S>& rhs, long M, double eps) {
  if (lhs.horizon() < M || rhs.horizon() < M)
    throw HorizonExhausted(static_cast<std::size_t>(M),
                           static_cast<std::size_t>(std::max(0L, std::min(lhs.horizon(), rhs.horizon()))));
  Residual r{std::move(name), std::move(statement), 0.0, true};
  for (long m = 0; m <= M; ++m) {
    r.value = std::max(r.value, magnitude(lhs[m] - rhs[m]));
    if (!approx_eq(lhs[m], rhs[m], eps)) r.pass = false;
  }
  return r;
}

/// Right-hand side of the explicit degree-2 Leibniz form on a q != 1 lattice.
template <Scalar S>
MomentFunctional<S> leibniz_deg2_rhs(const Lattice<S>& lat, const Polynomial<S>& f, const MomentFunctional<S>& u,
                                     long n) {
  if (lat.unit_base()) throw InvalidInput("the degree-2 Leibniz form needs a q != 1 lattice");
  if (f.degree() > 2) throw InvalidInput("the degree-2 Leibniz form needs deg f <= 2");
  const S a = f.coeff(2);
  const S& c3 = lat.c3();
  const S c12 = lat.c1() * lat.c2();
  const S alpha = lat.alpha();
  const S an = lat.alpha_n(n), an1 = lat.alpha_n(n - 1), gn = lat.gamma_n(n);
  const S fp3 = f.derivative()(c3);
  const S f3 = f(c3);
  const Polynomial<S> w = Polynomial<S>::linear_factor(c3);  // z - c3
  Polynomial<S> p0 = (a * alpha / (an * an1)) * (w * w) + (fp3 / an) * w +
                     Polynomial<S>::constant(f3 + S(4) * a * (S(1) - alpha * alpha) * gn * c12 / an1);
  MomentFunctional<S> rhs = left_multiply(dual_dx_power(lat, u, n), p0);
  if (n >= 1) {
    Polynomial<S> p1 =
        (gn / an) * ((a * (an + alpha * an1) / (an1 * an1)) * w + Polynomial<S>::constant(fp3));
    rhs = rhs + left_multiply(dual_dx_power(lat, dual_sx(lat, u), n - 1), p1);
  }
  if (n >= 2) {
    S k2 = a * gn * lat.gamma_n(n - 1) / (an1 * an1);
    rhs = rhs + k2 * dual_dx_power(lat, dual_sx_power(lat, u, 2), n - 2);
  }
  return rhs;
}

/// Both sides of a functional identity evaluated as moment vectors and compared
/// for moments 0..M. `n` is the power for the n-dependent identities.
template <Scalar S>
Residual verify_functional_identity(const Lattice<S>& lat, FunctionalIdentity id, const Polynomial<S>& f,
                                    const MomentFunctional<S>& u, long n, long M, double eps = kDefaultEps) {
  if (n < 0) throw InvalidInput("identity power must be non-negative");
  MomentFunctional<S> lhs, rhs;
  const S inv_alpha = S(1) / lat.alpha();
  switch (id) {
    case FunctionalIdentity::dual_product_dx: {
      Polynomial<S> df = dx(lat, f);
      lhs = dual_dx(lat, left_multiply(u, f));
      rhs = left_multiply(dual_dx(lat, u), sx(lat, f) - inv_alpha * (lat.u1() * df)) +
            left_multiply(dual_sx(lat, u), inv_alpha * df);
      break;
    }
    case FunctionalIdentity::dual_product_sx: {
      Polynomial<S> df = dx(lat, f);
      Polynomial<S> k1 = (lat.alpha() * lat.u2() - inv_alpha * (lat.u1() * lat.u1())) * df;
      lhs = dual_sx(lat, left_multiply(u, f));
      rhs = left_multiply(dual_dx(lat, u), k1) +
            left_multiply(dual_sx(lat, u), sx(lat, f) + inv_alpha * (lat.u1() * df));
      break;
    }
    case FunctionalIdentity::dual_dxn_sx: {
      MomentFunctional<S> dn = dual_dx_power(lat, u, n);
      lhs = lat.alpha() * dual_dx_power(lat, dual_sx(lat, u), n);
      rhs = lat.alpha_n(n + 1) * dual_sx(lat, dn) + left_multiply(dual_dx(lat, dn), lat.gamma_n(n) * lat.u1());
      break;
    }
    case FunctionalIdentity::leibniz: {
      lhs = dual_dx_power(lat, left_multiply(u, f), n);
      auto row = tnk_row(lat, f, n);
      for (long k = 0; k <= n; ++k) {
        auto term = left_multiply(dual_dx_power(lat, dual_sx_power(lat, u, k), n - k), row[static_cast<std::size_t>(k)]);
        rhs = k == 0 ? term : rhs + term;
      }
      break;
    }
    case FunctionalIdentity::leibniz_deg2: {
      // Compared against the general formula, which is the statement it specializes.
      auto row = tnk_row(lat, f, n);
      for (long k = 0; k <= n; ++k) {
        auto term = left_multiply(dual_dx_power(lat, dual_sx_power(lat, u, k), n - k), row[static_cast<std::size_t>(k)]);
        lhs = k == 0 ? term : lhs + term;
      }
      rhs = leibniz_deg2_rhs(lat, f, u, n);
      break;
    }
  }
  std::string label = identity_name(id);
  if (id != FunctionalIdentity::dual_product_dx && id != FunctionalIdentity::dual_product_sx)
    label += "[n=" + std::to_string(n) + "]";
  return compare_functionals(label, identity_statement(id), lhs, rhs, M, eps);
}

/// Moments 0..M of D_x(phi u) - S_x(psi u); all vanish for a Pearson solution.
template <Scalar S>
MomentFunctional<S> pearson_defect(const Lattice<S>& lat, const PearsonPair<S>& pair, const MomentFunctional<S>& u,
                                   long M) {
  u.ensure(M + 2);
  auto lhs = dual_dx(lat, left_multiply(u, pair.phi(), M + 2 - std::max(0L, pair.phi().degree())));
  auto rhs = dual_sx(lat, left_multiply(u, pair.psi(), M + 2 - std::max(0L, pair.psi().degree())));
  return (lhs - rhs).truncated(M);
}

}  // namespace latticeops

#endif  // LATTICEOPS_FUNCTIONAL_HPP
