#ifndef LATTICEOPS_POLYNOMIAL_HPP
#define LATTICEOPS_POLYNOMIAL_HPP

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "latticeops/error.hpp"
#include "latticeops/scalar.hpp"

namespace latticeops {

/// Dense univariate polynomial in z, coefficients lowest degree first.
/// Trailing zero coefficients are always trimmed, so the zero polynomial
/// has an empty coefficient vector and degree -1.
template <Scalar S>
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<S> coeffs) : c_(coeffs) { trim(); }
  explicit Polynomial(std::vector<S> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(const S& v) { return Polynomial(std::vector<S>{v}); }
  static Polynomial monomial(std::size_t n, const S& coeff = S(1)) {
    std::vector<S> c(n + 1, S(0));
    c[n] = coeff;
    return Polynomial(std::move(c));
  }
  /// z - root
  static Polynomial linear_factor(const S& root) { return Polynomial(std::vector<S>{-root, S(1)}); }

  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<S>& coeffs() const { return c_; }
  S coeff(long k) const {
    return (k < 0 || k >= static_cast<long>(c_.size())) ? S(0) : c_[static_cast<std::size_t>(k)];
  }
  S leading() const { return c_.empty() ? S(0) : c_.back(); }

  S operator()(const S& z) const {
    S r(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * z + *it;
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<S> r(std::max(a.c_.size(), b.c_.size()), S(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] + b.c_[i];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a) {
    std::vector<S> r;
    r.reserve(a.c_.size());
    for (const auto& x : a.c_) r.push_back(-x);
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<S> r(a.c_.size() + b.c_.size() - 1, S(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (latticeops::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const S& k, const Polynomial& p) {
    std::vector<S> r;
    r.reserve(p.c_.size());
    for (const auto& x : p.c_) r.push_back(k * x);
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const Polynomial& p, const S& k) { return k * p; }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<S> r;
    r.reserve(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) r.push_back(S(static_cast<long>(k)) * c_[k]);
    return Polynomial(std::move(r));
  }

  /// Synthetic division by (z - root). Returns (quotient, remainder).
  std::pair<Polynomial, S> divide_linear(const S& root) const {
    if (c_.empty()) return {Polynomial{}, S(0)};
    std::vector<S> q(c_.size() - 1, S(0));
    S carry = c_.back();
    for (std::size_t k = c_.size() - 1; k-- > 0;) {
      q[k] = carry;
      carry = c_[k] + carry * root;
    }
    return {Polynomial(std::move(q)), carry};
  }

  /// Exact quotient by (z - root); throws if the remainder does not vanish.
  Polynomial exact_divide_linear(const S& root) const {
    auto [q, rem] = divide_linear(root);
    if (!latticeops::is_zero(rem)) throw InvalidInput("polynomial is not divisible by the linear factor");
    return q;
  }

  Polynomial with_precision(long bits) const {
    std::vector<S> r;
    r.reserve(c_.size());
    for (const auto& x : c_) r.push_back(latticeops::with_precision(x, bits));
    return Polynomial(std::move(r));
  }

 private:
  void trim() {
    while (!c_.empty() && latticeops::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<S> c_;
};

/// Largest coefficient magnitude (0 for the zero polynomial).
template <Scalar S>
double max_abs_coeff(const Polynomial<S>& p) {
  double m = 0;
  for (const auto& c : p.coeffs()) m = std::max(m, magnitude(c));
  return m;
}

/// Coefficientwise approx_eq.
template <Scalar S>
bool approx_eq(const Polynomial<S>& a, const Polynomial<S>& b, double eps = kDefaultEps) {
  long n = std::max(a.degree(), b.degree());
  for (long k = 0; k <= n; ++k)
    if (!approx_eq(a.coeff(k), b.coeff(k), eps)) return false;
  return true;
}

/// Newton divided differences converted to the monomial basis.
/// Returns the unique polynomial of degree < zs.size() through (zs[i], ws[i]).
template <Scalar S>
Polynomial<S> interpolate(const std::vector<S>& zs, std::vector<S> ws) {
  const std::size_t n = zs.size();
  if (n == 0 || ws.size() != n) throw InvalidInput("interpolate needs matching, non-empty node lists");
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = n - 1; i >= j; --i) {
      S gap = zs[i] - zs[i - j];
      if (is_zero(gap)) throw InvalidInput("interpolation nodes must be pairwise distinct");
      ws[i] = (ws[i] - ws[i - 1]) / gap;
    }
  }
  // Horner-style expansion of the Newton form, working on a raw vector.
  std::vector<S> p{ws[n - 1]};
  for (std::size_t k = n - 1; k-- > 0;) {
    std::vector<S> next(p.size() + 1, S(0));
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i + 1] = next[i + 1] + p[i];
      next[i] = next[i] - zs[k] * p[i];
    }
    next[0] = next[0] + ws[k];
    p = std::move(next);
  }
  return Polynomial<S>(std::move(p));
}

template <Scalar S>
Polynomial<S> interpolate(const std::vector<std::pair<S, S>>& points) {
  std::vector<S> zs, ws;
  for (const auto& [z, w] : points) {
    zs.push_back(z);
    ws.push_back(w);
  }
  return interpolate(zs, std::move(ws));
}

template <Scalar S>
std::string to_string(const Polynomial<S>& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) s += (i ? ", " : "") + to_string(p.coeffs()[i]);
  return s + "]";
}

}  // namespace latticeops

#endif  // LATTICEOPS_POLYNOMIAL_HPP
