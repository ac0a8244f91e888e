#ifndef LATTICEOPS_LATTICE_HPP
#define LATTICEOPS_LATTICE_HPP

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latticeops/error.hpp"
#include "latticeops/polynomial.hpp"
#include "latticeops/scalar.hpp"

namespace latticeops {

enum class LatticeKind { q_quadratic, q_linear, quadratic, linear };

inline const char* kind_name(LatticeKind k) {
  switch (k) {
    case LatticeKind::q_quadratic: return "q-quadratic";
    case LatticeKind::q_linear: return "q-linear";
    case LatticeKind::quadratic: return "quadratic";
    case LatticeKind::linear: return "linear";
  }
  return "?";
}

inline LatticeKind parse_kind(const std::string& s) {
  if (s == "q-quadratic" || s == "q_quadratic") return LatticeKind::q_quadratic;
  if (s == "q-linear" || s == "q_linear") return LatticeKind::q_linear;
  if (s == "quadratic") return LatticeKind::quadratic;
  if (s == "linear") return LatticeKind::linear;
  throw InvalidInput("unknown lattice kind '" + s + "'");
}

inline constexpr long kDefaultConstantsHorizon = 2048;

/// alpha, beta and the sequences alpha_n, beta_n, gamma_n, tabulated for
/// 0 <= n <= horizon (plus alpha_{-1}, gamma_{-1}); indices beyond the
/// horizon are evaluated directly from the closed forms.
template <Scalar S>
struct LatticeConstants {
  S alpha;
  S beta;
  std::vector<S> alpha_n;
  std::vector<S> beta_n;
  std::vector<S> gamma_n;
};

template <Scalar S>
class Lattice {
 public:
  /// q != 1: x(s) = c[0] q^{-s} + c[1] q^{s} + c[2].
  /// q == 1: x(s) = c[0] s^2 + c[1] s + c[2].
  Lattice(const S& q, std::array<S, 3> c, long horizon = kDefaultConstantsHorizon) : q_(q), c_(std::move(c)) {
    if (!q.is_real() || real_sign(q) <= 0)
      throw InvalidInput("lattice parameter q must be a positive real");
    unit_ = q == S(1);
    if (unit_) {
      t_ = S(1);
      kind_ = is_zero(c_[0]) ? LatticeKind::linear : LatticeKind::quadratic;
      if (is_zero(c_[0]) && is_zero(c_[1]) && is_zero(c_[2]))
        throw InvalidInput("q = 1 lattice needs (c4, c5, c6) != (0, 0, 0)");
    } else {
      if (is_zero(c_[0]) && is_zero(c_[1])) throw InvalidInput("q != 1 lattice needs (c1, c2) != (0, 0)");
      kind_ = (!is_zero(c_[0]) && !is_zero(c_[1])) ? LatticeKind::q_quadratic : LatticeKind::q_linear;
      t_ = require_sqrt(q, "q (exact lattices need q = t^2 with rational t)");
    }
    init(horizon);
  }

  /// Builds a q != 1 lattice directly from its root t = q^{1/2}.
  static Lattice from_root(const S& t, std::array<S, 3> c, long horizon = kDefaultConstantsHorizon) {
    Lattice lat(t * t, std::move(c), horizon, t);
    return lat;
  }

  LatticeKind kind() const { return kind_; }
  bool unit_base() const { return unit_; }  // q == 1
  bool is_constant() const { return unit_ && is_zero(c_[0]) && is_zero(c_[1]); }
  const S& q() const { return q_; }
  const S& root() const { return t_; }  // q^{1/2}
  const std::array<S, 3>& c() const { return c_; }
  // Named constants; only the triple matching the kind is meaningful.
  const S& c1() const { return c_[0]; }
  const S& c2() const { return c_[1]; }
  const S& c3() const { return c_[2]; }
  const S& c4() const { return c_[0]; }
  const S& c5() const { return c_[1]; }
  const S& c6() const { return c_[2]; }

  const S& alpha() const { return k_->alpha; }
  const S& beta() const { return k_->beta; }
  const LatticeConstants<S>& constants() const { return *k_; }
  long horizon() const { return static_cast<long>(k_->alpha_n.size()) - 1; }

  S alpha_n(long n) const {
    if (n == -1) return k_->alpha;
    check_index(n);
    if (n <= horizon()) return k_->alpha_n[static_cast<std::size_t>(n)];
    return direct_alpha(n);
  }
  S gamma_n(long n) const {
    if (n == -1) return S(-1);
    check_index(n);
    if (n <= horizon()) return k_->gamma_n[static_cast<std::size_t>(n)];
    return direct_gamma(n);
  }
  S beta_n(long n) const {
    check_index(n);
    if (n <= horizon()) return k_->beta_n[static_cast<std::size_t>(n)];
    return direct_beta(n);
  }
  /// gamma_1 gamma_2 ... gamma_n, with gamma_0! = 1 (its size grows like n^2, so it is not tabulated).
  S gamma_factorial(long n) const {
    check_index(n);
    S r(1);
    for (long j = 1; j <= n; ++j) r = r * gamma_n(j);
    return r;
  }

  const Polynomial<S>& u1() const { return u1_; }
  const Polynomial<S>& u2() const { return u2_; }

  /// x(h/2) for an integer h, i.e. x at integer and half-integer s.
  S x_half(long h) const { return x_half_with(t_, c_, unit_, h); }

  /// x(s) for s given as an exact rational; s must be an integer or half-integer.
  S x_eval(const mpq_class& s) const {
    mpq_class h = 2 * s;
    if (h.get_den() != 1) throw InvalidInput("x_eval: s must be an integer or a half-integer");
    if (!h.get_num().fits_slong_p()) throw InvalidInput("x_eval: s out of range");
    return x_half(h.get_num().get_si());
  }

  /// m pairs (s, x(s)) with pairwise distinct x(s), s = 0, 1, 2, ... skipping collisions.
  std::vector<std::pair<long, S>> nodes(std::size_t m) const {
    if (m == 0) throw InvalidInput("nodes: m must be positive");
    std::vector<std::pair<long, S>> out;
    for (long s = 0; out.size() < m; ++s) {
      if (s >= static_cast<long>(4 * m)) throw InvalidInput("degenerate lattice: not enough distinct nodes");
      S z = x_half(2 * s);
      bool fresh = true;
      for (const auto& [_, w] : out) fresh = fresh && !is_zero(z - w);
      if (fresh) out.emplace_back(s, z);
    }
    return out;
  }

  /// Same lattice with every constant rounded to `bits` (identity on the exact backend).
  Lattice with_precision(long bits, long horizon = 64) const {
    std::array<S, 3> c{latticeops::with_precision(c_[0], bits), latticeops::with_precision(c_[1], bits),
                       latticeops::with_precision(c_[2], bits)};
    if (unit_) return Lattice(latticeops::with_precision(q_, bits), c, horizon);
    return from_root(latticeops::with_precision(t_, bits), c, horizon);
  }

  /// Shared helper: x(h/2) given explicit root and constants.
  static S x_half_with(const S& t, const std::array<S, 3>& c, bool unit, long h) {
    if (unit) {
      S s = S(h) / S(2);
      return (c[0] * s + c[1]) * s + c[2];
    }
    S th = pow_int(t, h);
    return c[0] / th + c[1] * th + c[2];
  }

  /// Memo of D_x / S_x images of monomials, filled by the operator module.
  struct MonomialCache {
    std::mutex mutex;
    std::vector<std::optional<Polynomial<S>>> dx, sx;
  };
  MonomialCache& monomial_cache() const { return *cache_; }

 private:
  Lattice(const S& q, std::array<S, 3> c, long horizon, const S& t) : q_(q), c_(std::move(c)), t_(t) {
    unit_ = false;
    if (is_zero(c_[0]) && is_zero(c_[1])) throw InvalidInput("q != 1 lattice needs (c1, c2) != (0, 0)");
    kind_ = (!is_zero(c_[0]) && !is_zero(c_[1])) ? LatticeKind::q_quadratic : LatticeKind::q_linear;
    init(horizon);
  }

  void check_index(long n) const {
    if (n < 0) throw InvalidInput("lattice sequences are defined for n >= 0 (and alpha, gamma at -1)");
  }

  S direct_alpha(long n) const {
    if (unit_) return S(1);
    S tn = pow_int(t_, n);
    return (tn + S(1) / tn) / S(2);
  }
  S direct_gamma(long n) const {
    if (unit_) return S(n);
    S tn = pow_int(t_, n);
    return (tn - S(1) / tn) / (t_ - S(1) / t_);
  }
  S direct_beta(long n) const {
    if (unit_) return k_->beta * S(n) * S(n);
    return k_->beta * (direct_alpha(n) - S(1)) / (k_->alpha - S(1));
  }

  void init(long horizon) {
    if (horizon < 2) horizon = 2;
    auto k = std::make_shared<LatticeConstants<S>>();
    if (unit_) {
      k->alpha = S(1);
      k->beta = c_[0] / S(4);
    } else {
      k->alpha = (t_ + S(1) / t_) / S(2);
      k->beta = (S(1) - k->alpha) * c_[2];
    }
    k_ = k;
    const std::size_t H = static_cast<std::size_t>(horizon) + 1;
    k->alpha_n.reserve(H);
    k->gamma_n.reserve(H);
    k->beta_n.reserve(H);
    if (unit_) {
      for (std::size_t n = 0; n < H; ++n) {
        S sn(static_cast<long>(n));
        k->alpha_n.push_back(S(1));
        k->gamma_n.push_back(sn);
        k->beta_n.push_back(k->beta * sn * sn);
      }
    } else {
      const S inv_t = S(1) / t_;
      const S width = t_ - inv_t;
      const S beta_scale = k->beta / (k->alpha - S(1));
      S tn(1), itn(1);
      for (std::size_t n = 0; n < H; ++n) {
        S an = (tn + itn) / S(2);
        k->alpha_n.push_back(an);
        k->gamma_n.push_back(n == 0 ? S(0) : (tn - itn) / width);
        k->beta_n.push_back(n == 0 ? S(0) : beta_scale * (an - S(1)));
        tn = tn * t_;
        itn = itn * inv_t;
      }
      k->alpha_n[1] = k->alpha;
      k->gamma_n[1] = S(1);
      k->beta_n[1] = k->beta;
    }

    if (unit_) {
      u1_ = Polynomial<S>::constant(c_[0] / S(2));
      // c4 (z - c6) + c5^2 / 4
      u2_ = Polynomial<S>(std::vector<S>{c_[1] * c_[1] / S(4) - c_[0] * c_[2], c_[0]});
    } else {
      S a2 = k->alpha * k->alpha - S(1);
      u1_ = Polynomial<S>(std::vector<S>{-a2 * c_[2], a2});
      u2_ = Polynomial<S>(
          std::vector<S>{a2 * (c_[2] * c_[2] - S(4) * c_[0] * c_[1]), S(-2) * a2 * c_[2], a2});
    }
    cache_ = std::make_shared<MonomialCache>();
  }

  S q_;
  std::array<S, 3> c_;
  S t_;
  bool unit_ = false;
  LatticeKind kind_ = LatticeKind::q_quadratic;
  std::shared_ptr<const LatticeConstants<S>> k_;
  Polynomial<S> u1_, u2_;
  std::shared_ptr<MonomialCache> cache_;
};

template <Scalar S>
Lattice<S> make_q_lattice(const S& q, const S& c1, const S& c2, const S& c3) {
  if (q == S(1)) throw InvalidInput("q-lattice needs q != 1");
  return Lattice<S>(q, {c1, c2, c3});
}

template <Scalar S>
Lattice<S> make_unit_lattice(const S& c4, const S& c5, const S& c6) {
  return Lattice<S>(S(1), {c4, c5, c6});
}

/// x(s) = (q^{-s} + q^{s}) / 2, the Askey-Wilson lattice.
template <Scalar S>
Lattice<S> standard_q_lattice(const S& q) {
  S h = S(1) / S(2);
  return make_q_lattice(q, h, h, S(0));
}

}  // namespace latticeops

#endif  // LATTICEOPS_LATTICE_HPP
