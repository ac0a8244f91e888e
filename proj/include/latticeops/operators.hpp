#ifndef LATTICEOPS_OPERATORS_HPP
#define LATTICEOPS_OPERATORS_HPP

// The x-derivative D_x and x-average S_x on polynomials, realized by
// evaluating at x(s +- 1/2) over integer nodes s and interpolating back.
//
// On the bigfloat backend the evaluation and interpolation run at a working
// precision raised by an estimate of the bits lost to the node geometry
// (Vandermonde conditioning plus the growth of the Newton-to-monomial
// conversion), and the result is rounded back to the caller's precision.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "latticeops/lattice.hpp"
#include "latticeops/polynomial.hpp"
#include "latticeops/scalar.hpp"

namespace latticeops {

namespace detail {

template <Scalar S>
long base_precision(const Lattice<S>& lat, const Polynomial<S>& f) {
  if constexpr (is_exact_v<S>) {
    return 0;
  } else {
    long p = std::max(default_precision(), precision_of(lat.root()));
    for (const auto& c : lat.c()) p = std::max(p, precision_of(c));
    for (const auto& c : f.coeffs()) p = std::max(p, precision_of(c));
    return p;
  }
}

/// Nodes s are walked in the direction in which |x(s)| grows, which keeps the
/// interpolation well separated on q-linear lattices.
template <Scalar S>
long node_direction(const Lattice<S>& lat) {
  if (lat.unit_base()) return 1;
  bool t_above_one = magnitude(lat.root()) > 1.0;
  // q^{s} grows for s > 0 when t > 1; it multiplies c2 (c[1]).
  if (t_above_one) return is_zero(lat.c2()) ? -1 : 1;
  return is_zero(lat.c1()) ? -1 : 1;
}

template <Scalar S>
bool nearly_equal_nodes(const S& a, const S& b) {
  if constexpr (is_exact_v<S>) {
    return a == b;
  } else {
    long bits = std::max(precision_of(a), precision_of(b));
    double scale = std::max({1.0, magnitude(a), magnitude(b)});
    double gap = magnitude(a - b);
    return gap <= std::ldexp(scale, -static_cast<int>(bits - 16));
  }
}

/// m integer nodes for operator evaluation; skips repeated x(s) and, for the
/// difference operator, points where x(s + 1/2) = x(s - 1/2).
template <Scalar S>
std::vector<long> operator_nodes(const Lattice<S>& lat, std::size_t m, bool difference) {
  const long dir = node_direction(lat);
  std::vector<long> s_out;
  std::vector<S> z_out;
  for (long k = 0; s_out.size() < m; ++k) {
    if (k > static_cast<long>(8 * m + 16)) throw InvalidInput("degenerate lattice: not enough distinct nodes");
    long s = dir * k;
    S z = lat.x_half(2 * s);
    if (difference && nearly_equal_nodes(lat.x_half(2 * s + 1), lat.x_half(2 * s - 1))) continue;
    bool fresh = true;
    for (const auto& w : z_out) fresh = fresh && !nearly_equal_nodes(z, w);
    if (!fresh) continue;
    s_out.push_back(s);
    z_out.push_back(z);
  }
  return s_out;
}

template <Scalar S>
long guard_bits(const Lattice<S>& lat, const std::vector<long>& nodes) {
  double bits = 32.0 + 2.0 * static_cast<double>(nodes.size());
  std::vector<S> zs;
  for (long s : nodes) zs.push_back(lat.x_half(2 * s));
  for (std::size_t j = 0; j < zs.size(); ++j) {
    bits += std::log2(1.0 + magnitude(zs[j]));
    for (std::size_t i = 0; i < j; ++i) {
      double gap = magnitude(zs[i] - zs[j]);
      if (gap < 1.0) bits += -std::log2(std::max(gap, 1e-300));
    }
  }
  return static_cast<long>(std::ceil(bits));
}

/// Shared evaluation/interpolation path for D_x (difference = true) and S_x.
template <Scalar S>
Polynomial<S> apply_lattice_operator(const Lattice<S>& lat, const Polynomial<S>& f, bool difference) {
  const long d = f.degree();
  if (difference && d <= 0) return {};
  if (d < 0) return {};
  if (lat.is_constant()) return difference ? f.derivative() : f;
  const std::size_t m = static_cast<std::size_t>(difference ? d : d + 1);
  const std::vector<long> nodes = operator_nodes(lat, m, difference);

  auto run = [&](const S& t, const std::array<S, 3>& c, const Polynomial<S>& g) {
    std::vector<S> zs, ws;
    zs.reserve(m);
    ws.reserve(m);
    for (long s : nodes) {
      S zp = Lattice<S>::x_half_with(t, c, lat.unit_base(), 2 * s + 1);
      S zm = Lattice<S>::x_half_with(t, c, lat.unit_base(), 2 * s - 1);
      zs.push_back(Lattice<S>::x_half_with(t, c, lat.unit_base(), 2 * s));
      if (difference)
        ws.push_back((g(zp) - g(zm)) / (zp - zm));
      else
        ws.push_back((g(zp) + g(zm)) / S(2));
    }
    return interpolate(zs, std::move(ws));
  };

  if constexpr (is_exact_v<S>) {
    return run(lat.root(), lat.c(), f);
  } else {
    const long base = base_precision(lat, f);
    const long work = base + guard_bits(lat, nodes);
    Polynomial<S> result;
    {
      PrecisionScope scope(work);
      std::array<S, 3> c{with_precision(lat.c()[0], work), with_precision(lat.c()[1], work),
                         with_precision(lat.c()[2], work)};
      result = run(with_precision(lat.root(), work), c, f.with_precision(work));
    }
    return result.with_precision(base);
  }
}

}  // namespace detail

/// x-derivative: g(x(s)) = [f(x(s+1/2)) - f(x(s-1/2))] / [x(s+1/2) - x(s-1/2)].
template <Scalar S>
Polynomial<S> dx(const Lattice<S>& lat, const Polynomial<S>& f) {
  return detail::apply_lattice_operator(lat, f, true);
}

/// x-average: g(x(s)) = [f(x(s+1/2)) + f(x(s-1/2))] / 2.
template <Scalar S>
Polynomial<S> sx(const Lattice<S>& lat, const Polynomial<S>& f) {
  return detail::apply_lattice_operator(lat, f, false);
}

/// D_x applied n times.
template <Scalar S>
Polynomial<S> dx_power(const Lattice<S>& lat, Polynomial<S> f, long n) {
  for (long i = 0; i < n; ++i) f = dx(lat, f);
  return f;
}

/// D_x z^n and S_x z^n, memoized on the lattice.
template <Scalar S>
Polynomial<S> monomial_image(const Lattice<S>& lat, std::size_t n, bool difference) {
  auto& cache = lat.monomial_cache();
  {
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto& v = difference ? cache.dx : cache.sx;
    if (n < v.size() && v[n]) return *v[n];
  }
  Polynomial<S> img = difference ? dx(lat, Polynomial<S>::monomial(n)) : sx(lat, Polynomial<S>::monomial(n));
  std::lock_guard<std::mutex> lock(cache.mutex);
  auto& v = difference ? cache.dx : cache.sx;
  if (v.size() <= n) v.resize(n + 1);
  v[n] = img;
  return img;
}

/// Top three coefficients of D_x z^n and S_x z^n on a q != 1 lattice.
template <Scalar S>
struct MonomialAction {
  long n = 0;
  S gamma, u, v;        // D_x z^n = gamma z^{n-1} + u z^{n-2} + v z^{n-3} + ...
  S alpha, u_hat, v_hat;  // S_x z^n = alpha z^n + u_hat z^{n-1} + v_hat z^{n-2} + ...
};

template <Scalar S>
MonomialAction<S> monomial_action(const Lattice<S>& lat, long n) {
  if (lat.unit_base()) throw InvalidInput("monomial_action needs a q != 1 lattice");
  if (n < 0) throw InvalidInput("monomial_action needs n >= 0");
  const S N(n);
  const S c12 = lat.c1() * lat.c2();
  // Terms n * seq(n - k) vanish at n = 0, where seq(n - k) may be undefined.
  MonomialAction<S> m;
  m.n = n;
  m.gamma = lat.gamma_n(n);
  m.alpha = lat.alpha_n(n);
  m.u = n == 0 ? S(0) : (N * lat.gamma_n(n - 1) - S(n - 1) * lat.gamma_n(n)) * lat.c3();
  const S c33 = lat.c3() * lat.c3();
  if (n >= 2) {
    m.v = (N * lat.gamma_n(n - 2) - S(n - 2) * lat.gamma_n(n)) * c12 +
          (N * S(n - 1) * lat.gamma_n(n - 2) - S(2) * N * S(n - 2) * lat.gamma_n(n - 1) +
           S(n - 1) * S(n - 2) * lat.gamma_n(n)) * c33 / S(2);
    m.v_hat = N * (lat.alpha_n(n - 2) - lat.alpha_n(n)) * c12 + N * S(n - 1) * (lat.alpha() - S(1)) * lat.alpha_n(n - 1) * c33;
  }
  m.u_hat = n == 0 ? S(0) : N * (lat.alpha_n(n - 1) - lat.alpha_n(n)) * lat.c3();
  return m;
}

/// T_{n,k} f: T_{0,0} f = f, T_{n,k} = 0 outside 0 <= k <= n, and
/// T_{n,k} = S_x T_{n-1,k} - (gamma_{n-k}/alpha_{n-k}) U1 D_x T_{n-1,k}
///           + (1/alpha_{n+1-k}) D_x T_{n-1,k-1}.
/// Returns the whole row T_{n,0..n}.
template <Scalar S>
std::vector<Polynomial<S>> tnk_row(const Lattice<S>& lat, const Polynomial<S>& f, long n) {
  if (n < 0) throw InvalidInput("tnk needs n >= 0");
  std::vector<Polynomial<S>> row{f};
  for (long m = 1; m <= n; ++m) {
    std::vector<Polynomial<S>> next(static_cast<std::size_t>(m + 1));
    for (long k = 0; k <= m; ++k) {
      Polynomial<S> r;
      if (k <= m - 1) {
        const auto& prev = row[static_cast<std::size_t>(k)];
        r = sx(lat, prev) - (lat.gamma_n(m - k) / lat.alpha_n(m - k)) * (lat.u1() * dx(lat, prev));
      }
      if (k >= 1) r = r + (S(1) / lat.alpha_n(m + 1 - k)) * dx(lat, row[static_cast<std::size_t>(k - 1)]);
      next[static_cast<std::size_t>(k)] = r;
    }
    row = std::move(next);
  }
  return row;
}

template <Scalar S>
Polynomial<S> tnk(const Lattice<S>& lat, const Polynomial<S>& f, long n, long k) {
  if (n < 0) throw InvalidInput("tnk needs n >= 0");
  if (k < 0 || k > n) return {};
  return tnk_row(lat, f, n)[static_cast<std::size_t>(k)];
}

/// Result of comparing two sides of an identity.
struct Residual {
  std::string name;       // identity tag
  std::string statement;  // the identity in words/symbols
  double value = 0;       // largest |LHS - RHS| entry
  bool pass = true;
};

template <Scalar S>
Residual compare_polys(std::string name, std::string statement, const Polynomial<S>& lhs,
                       const Polynomial<S>& rhs, double eps) {
  Residual r{std::move(name), std::move(statement), max_abs_coeff(lhs - rhs), approx_eq(lhs, rhs, eps)};
  return r;
}

enum class OperatorIdentity { product_dx, product_sx, swap_sx, swap_dx, dxn_sx };

inline const char* identity_name(OperatorIdentity id) {
  switch (id) {
    case OperatorIdentity::product_dx: return "product_dx";
    case OperatorIdentity::product_sx: return "product_sx";
    case OperatorIdentity::swap_sx: return "swap_sx";
    case OperatorIdentity::swap_dx: return "swap_dx";
    case OperatorIdentity::dxn_sx: return "dxn_sx";
  }
  return "?";
}

inline OperatorIdentity parse_operator_identity(const std::string& s) {
  for (auto id : {OperatorIdentity::product_dx, OperatorIdentity::product_sx, OperatorIdentity::swap_sx,
                  OperatorIdentity::swap_dx, OperatorIdentity::dxn_sx})
    if (s == identity_name(id)) return id;
  throw InvalidInput("unknown operator identity '" + s + "'");
}

inline const char* identity_statement(OperatorIdentity id) {
  switch (id) {
    case OperatorIdentity::product_dx: return "D(fg) = Df Sg + Sf Dg";
    case OperatorIdentity::product_sx: return "S(fg) = Df Dg U2 + Sf Sg";
    case OperatorIdentity::swap_sx: return "f Sg = S((Sf - U1 Df/alpha) g) - U2 D(g Df)/alpha";
    case OperatorIdentity::swap_dx: return "f Dg = D((Sf - U1 Df/alpha) g) - S(g Df)/alpha";
    case OperatorIdentity::dxn_sx: return "D^n S f = alpha_n S D^n f + gamma_n U1 D^{n+1} f";
  }
  return "";
}

/// Evaluates both sides of an operator identity as polynomials and compares them.
/// `g` is used by the product and swap identities; `n` only by dxn_sx.
template <Scalar S>
Residual verify_operator_identity(const Lattice<S>& lat, OperatorIdentity id, const Polynomial<S>& f,
                                  const Polynomial<S>& g = {}, long n = 1, double eps = kDefaultEps) {
  Polynomial<S> lhs, rhs;
  const S inv_alpha = S(1) / lat.alpha();
  switch (id) {
    case OperatorIdentity::product_dx:
      lhs = dx(lat, f * g);
      rhs = dx(lat, f) * sx(lat, g) + sx(lat, f) * dx(lat, g);
      break;
    case OperatorIdentity::product_sx:
      lhs = sx(lat, f * g);
      rhs = dx(lat, f) * dx(lat, g) * lat.u2() + sx(lat, f) * sx(lat, g);
      break;
    case OperatorIdentity::swap_sx: {
      Polynomial<S> df = dx(lat, f);
      lhs = f * sx(lat, g);
      rhs = sx(lat, (sx(lat, f) - inv_alpha * (lat.u1() * df)) * g) - inv_alpha * (lat.u2() * dx(lat, g * df));
      break;
    }
    case OperatorIdentity::swap_dx: {
      Polynomial<S> df = dx(lat, f);
      lhs = f * dx(lat, g);
      rhs = dx(lat, (sx(lat, f) - inv_alpha * (lat.u1() * df)) * g) - inv_alpha * sx(lat, g * df);
      break;
    }
    case OperatorIdentity::dxn_sx: {
      if (n < 0) throw InvalidInput("dxn_sx needs n >= 0");
      lhs = dx_power(lat, sx(lat, f), n);
      Polynomial<S> dn = dx_power(lat, f, n);
      rhs = lat.alpha_n(n) * sx(lat, dn) + lat.gamma_n(n) * (lat.u1() * dx(lat, dn));
      break;
    }
  }
  std::string label = identity_name(id);
  if (id == OperatorIdentity::dxn_sx) label += "[n=" + std::to_string(n) + "]";
  return compare_polys(label, identity_statement(id), lhs, rhs, eps);
}

}  // namespace latticeops

#endif  // LATTICEOPS_OPERATORS_HPP
