#ifndef LATTICEOPS_SCALAR_HPP
#define LATTICEOPS_SCALAR_HPP

// Coefficient fields. Two interchangeable backends share one interface:
//
//   ExactScalar  complex numbers with rational parts (GMP), no rounding;
//   BigScalar    complex numbers with MPFR parts, per-value binary precision.
//
// Every algorithm in the library is a template over a type satisfying the
// `Scalar` concept below, and reaches backend-specific behaviour through the
// free functions in this header (is_zero, approx_eq, sqrt_of, ...).

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "latticeops/error.hpp"

namespace latticeops {

enum class Backend { exact, bigfloat };

inline constexpr long kDefaultPrecisionBits = 128;
inline constexpr long kMinPrecisionBits = 64;
inline constexpr double kDefaultEps = 1e-25;

namespace detail {
inline long& thread_precision() {
  thread_local long bits = kDefaultPrecisionBits;
  return bits;
}
}  // namespace detail

/// Precision (bits) given to BigFloat values created without an explicit one.
inline long default_precision() { return detail::thread_precision(); }

/// Sets the thread's default BigFloat precision for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(long bits) : saved_(detail::thread_precision()) {
    if (bits < MPFR_PREC_MIN) throw InvalidInput("precision below MPFR minimum");
    detail::thread_precision() = bits;
  }
  ~PrecisionScope() { detail::thread_precision() = saved_; }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  long saved_;
};

/// Parses "p/q", "-7", "0.125", "3e-4" into an exact rational.
inline mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }),
          s.end());
  if (s.empty()) throw InvalidInput("empty number");
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      mpq_class r(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
      if (r.get_den() == 0) throw InvalidInput("zero denominator in '" + s + "'");
      r.canonicalize();
      return r;
    }
    long exponent = 0;
    std::string mantissa = s;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
      exponent = std::stol(s.substr(e + 1));
      mantissa = s.substr(0, e);
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
      negative = mantissa[0] == '-';
      mantissa.erase(0, 1);
    }
    if (auto dot = mantissa.find('.'); dot != std::string::npos) {
      exponent -= static_cast<long>(mantissa.size() - dot - 1);
      mantissa.erase(dot, 1);
    }
    if (mantissa.empty() ||
        !std::all_of(mantissa.begin(), mantissa.end(), [](unsigned char ch) { return std::isdigit(ch); }))
      throw InvalidInput("not a number: '" + std::string(text) + "'");
    mpz_class num(mantissa);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    mpq_class r = exponent >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
    r.canonicalize();
    return negative ? mpq_class(-r) : r;
  } catch (const std::invalid_argument&) {
    throw InvalidInput("not a number: '" + std::string(text) + "'");
  } catch (const std::out_of_range&) {
    throw InvalidInput("number out of range: '" + std::string(text) + "'");
  }
}

// ---------------------------------------------------------------------------
// BigFloat: value-semantic MPFR real. Each value owns its precision; binary
// operations round to the larger precision of their operands, so promoting
// one operand is enough to run a whole expression at higher precision.

class BigFloat {
 public:
  BigFloat() : BigFloat(0L) {}
  BigFloat(int v) : BigFloat(static_cast<long>(v)) {}
  BigFloat(long v) {
    mpfr_init2(v_, default_precision());
    mpfr_set_si(v_, v, MPFR_RNDN);
  }
  explicit BigFloat(double v) {
    mpfr_init2(v_, default_precision());
    mpfr_set_d(v_, v, MPFR_RNDN);
  }
  explicit BigFloat(const mpq_class& v, long bits = default_precision()) {
    mpfr_init2(v_, bits);
    mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
  }
  static BigFloat parse(std::string_view text, long bits = default_precision()) {
    BigFloat r(Uninit{}, bits);
    std::string s(text);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) {
      // Fall back to exact rational parsing for "p/q" forms.
      mpfr_set_q(r.v_, parse_rational(s).get_mpq_t(), MPFR_RNDN);
    }
    return r;
  }

  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }
  BigFloat rounded_to(long bits) const {
    BigFloat r(Uninit{}, bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// Binary exponent e with 2^(e-1) <= |x| < 2^e; a large negative value for zero.
  long exponent2() const { return is_zero() ? -(1L << 40) : static_cast<long>(mpfr_get_exp(v_)); }

  std::string to_string(int digits = 0) const {
    if (is_zero()) return "0";  // no signed zero in reports
    if (digits <= 0) digits = static_cast<int>(mpfr_get_str_ndigits(10, mpfr_get_prec(v_)));
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

  mpfr_srcptr get() const { return v_; }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_add); }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_sub); }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_mul); }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    if (b.is_zero()) throw DivisionByZero();
    return binary(a, b, mpfr_div);
  }
  friend BigFloat operator-(const BigFloat& a) {
    BigFloat r(Uninit{}, a.precision());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  BigFloat& operator+=(const BigFloat& o) { return *this = *this + o; }
  BigFloat& operator-=(const BigFloat& o) { return *this = *this - o; }
  BigFloat& operator*=(const BigFloat& o) { return *this = *this * o; }
  BigFloat& operator/=(const BigFloat& o) { return *this = *this / o; }

  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend auto operator<=>(const BigFloat& a, const BigFloat& b) {
    int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

  friend BigFloat abs(const BigFloat& a) {
    BigFloat r(Uninit{}, a.precision());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat sqrt(const BigFloat& a) {
    if (a.sign() < 0) throw InvalidInput("square root of a negative real");
    BigFloat r(Uninit{}, a.precision());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat hypot(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_hypot); }

  friend std::ostream& operator<<(std::ostream& os, const BigFloat& x) { return os << x.to_string(); }

 private:
  struct Uninit {};
  BigFloat(Uninit, long bits) { mpfr_init2(v_, bits); }

  template <class Op>
  static BigFloat binary(const BigFloat& a, const BigFloat& b, Op op) {
    BigFloat r(Uninit{}, std::max(a.precision(), b.precision()));
    op(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  mpfr_t v_;
};

// ---------------------------------------------------------------------------
// Complex<R>: Cartesian complex numbers over an exact or floating real type.
// std::complex is only specified for the built-in floating types.

template <class R>
class Complex {
 public:
  Complex() : re_(0), im_(0) {}
  Complex(int v) : re_(v), im_(0) {}
  Complex(long v) : re_(v), im_(0) {}
  Complex(R re) : re_(std::move(re)), im_(0) {}
  Complex(R re, R im) : re_(std::move(re)), im_(std::move(im)) {}

  const R& real() const { return re_; }
  const R& imag() const { return im_; }
  bool is_real() const { return im_ == R(0); }

  friend Complex operator+(const Complex& a, const Complex& b) { return {R(a.re_ + b.re_), R(a.im_ + b.im_)}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {R(a.re_ - b.re_), R(a.im_ - b.im_)}; }
  friend Complex operator-(const Complex& a) { return {R(-a.re_), R(-a.im_)}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    if (b.im_ == R(0)) return {R(a.re_ * b.re_), R(a.im_ * b.re_)};
    if (a.im_ == R(0)) return {R(a.re_ * b.re_), R(a.re_ * b.im_)};
    return {R(a.re_ * b.re_ - a.im_ * b.im_), R(a.re_ * b.im_ + a.im_ * b.re_)};
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    if (b.im_ == R(0)) {
      if (b.re_ == R(0)) throw DivisionByZero();
      return {R(a.re_ / b.re_), R(a.im_ / b.re_)};
    }
    R den = b.re_ * b.re_ + b.im_ * b.im_;
    return {R((a.re_ * b.re_ + a.im_ * b.im_) / den), R((a.im_ * b.re_ - a.re_ * b.im_) / den)};
  }
  Complex& operator+=(const Complex& o) { return *this = *this + o; }
  Complex& operator-=(const Complex& o) { return *this = *this - o; }
  Complex& operator*=(const Complex& o) { return *this = *this * o; }
  Complex& operator/=(const Complex& o) { return *this = *this / o; }

  friend bool operator==(const Complex& a, const Complex& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

  friend Complex conj(const Complex& a) { return {a.re_, R(-a.im_)}; }

  friend std::ostream& operator<<(std::ostream& os, const Complex& z) {
    if (z.im_ == R(0)) return os << z.re_;
    return os << '(' << z.re_ << (z.im_ < R(0) ? " - " : " + ") << abs(z.im_) << "i)";
  }

 private:
  R re_;
  R im_;
};

using ExactScalar = Complex<mpq_class>;
using BigScalar = Complex<BigFloat>;

template <class S>
concept Scalar = requires(const S& a, const S& b) {
  { a + b } -> std::convertible_to<S>;
  { a - b } -> std::convertible_to<S>;
  { a * b } -> std::convertible_to<S>;
  { a / b } -> std::convertible_to<S>;
  { -a } -> std::convertible_to<S>;
  { a == b } -> std::convertible_to<bool>;
  S(1);
};

template <class S>
inline constexpr bool is_exact_v = std::same_as<S, ExactScalar>;

template <class S>
inline constexpr Backend backend_of = is_exact_v<S> ? Backend::exact : Backend::bigfloat;

inline const char* backend_name(Backend b) { return b == Backend::exact ? "exact" : "bigfloat"; }

// --- construction ----------------------------------------------------------

template <Scalar S>
S from_rational(mpq_class re, mpq_class im = 0) {
  re.canonicalize();  // callers may pass mpq_class(p, q) with a common factor
  im.canonicalize();
  if constexpr (is_exact_v<S>) {
    return S(re, im);
  } else {
    return S(BigFloat(re), BigFloat(im));
  }
}

template <Scalar S>
S from_int(long v) {
  return S(v);
}

/// Parses a real number given as text. Exact backend: must be a finite decimal or "p/q".
template <Scalar S>
S parse_real(std::string_view text) {
  if constexpr (is_exact_v<S>) {
    return S(parse_rational(text));
  } else {
    return S(BigFloat::parse(text));
  }
}

/// The imaginary unit.
template <Scalar S>
S imag_unit() {
  return from_rational<S>(0, 1);
}

// --- predicates and magnitudes ----------------------------------------------

inline bool is_zero(const ExactScalar& a) { return sgn(a.real()) == 0 && sgn(a.imag()) == 0; }
inline bool is_zero(const BigScalar& a) { return a.real().is_zero() && a.imag().is_zero(); }

/// max(|Re|, |Im|) for exact scalars (the modulus is irrational in general).
inline double magnitude(const ExactScalar& a) {
  return std::max(mpq_class(abs(a.real())).get_d(), mpq_class(abs(a.imag())).get_d());
}
inline double magnitude(const BigScalar& a) { return hypot(a.real(), a.imag()).to_double(); }

/// Modulus as a BigFloat, full precision.
inline BigFloat modulus(const BigScalar& a) { return hypot(a.real(), a.imag()); }

inline long precision_of(const ExactScalar&) { return 0; }
inline long precision_of(const BigScalar& a) { return std::max(a.real().precision(), a.imag().precision()); }

inline ExactScalar with_precision(const ExactScalar& a, long) { return a; }
inline BigScalar with_precision(const BigScalar& a, long bits) {
  return {a.real().rounded_to(bits), a.imag().rounded_to(bits)};
}

/// Exact backend: a == b exactly (eps ignored). Bigfloat: |a - b| <= eps * max(1, |a|, |b|).
inline bool approx_eq(const ExactScalar& a, const ExactScalar& b, double = kDefaultEps) { return a == b; }
inline bool approx_eq(const BigScalar& a, const BigScalar& b, double eps = kDefaultEps) {
  if (eps < 0) throw InvalidInput("negative tolerance");
  BigFloat scale = std::max({BigFloat(1L), modulus(a), modulus(b)});
  return modulus(a - b) <= BigFloat(eps) * scale;
}

/// Zero test used for regularity witnesses: exact zero, or |a| <= eps * scale.
inline bool is_negligible(const ExactScalar& a, double, double) { return is_zero(a); }
inline bool is_negligible(const BigScalar& a, double eps, double scale) {
  return modulus(a) <= BigFloat(eps) * BigFloat(std::max(1.0, scale));
}

/// Sign of the real part.
inline int real_sign(const ExactScalar& a) { return sgn(a.real()); }
inline int real_sign(const BigScalar& a) { return a.real().sign(); }

// --- roots and powers -------------------------------------------------------

namespace detail {
inline std::optional<mpq_class> rational_sqrt(const mpq_class& v) {
  if (sgn(v) < 0) return std::nullopt;
  if (mpz_perfect_square_p(v.get_num_mpz_t()) == 0 || mpz_perfect_square_p(v.get_den_mpz_t()) == 0)
    return std::nullopt;
  mpz_class n = sqrt(v.get_num());
  mpz_class d = sqrt(v.get_den());
  return mpq_class(n, d);
}
}  // namespace detail

/// Principal square root. Exact backend: only for real rationals whose root is rational
/// (negative reals give i*sqrt(-x)); otherwise nullopt.
inline std::optional<ExactScalar> sqrt_of(const ExactScalar& a) {
  if (sgn(a.imag()) != 0) return std::nullopt;
  if (sgn(a.real()) >= 0) {
    if (auto r = detail::rational_sqrt(a.real())) return ExactScalar(*r);
    return std::nullopt;
  }
  if (auto r = detail::rational_sqrt(mpq_class(-a.real()))) return ExactScalar(mpq_class(0), *r);
  return std::nullopt;
}

inline std::optional<BigScalar> sqrt_of(const BigScalar& a) {
  const BigFloat& x = a.real();
  const BigFloat& y = a.imag();
  if (y.is_zero()) {
    if (x.sign() >= 0) return BigScalar(sqrt(x), y);
    return BigScalar(BigFloat(0L).rounded_to(x.precision()), sqrt(-x));
  }
  BigFloat r = hypot(x, y);
  BigFloat re = sqrt((r + x) / BigFloat(2L));
  BigFloat im = sqrt((r - x) / BigFloat(2L));
  if (y.sign() < 0) im = -im;
  return BigScalar(re, im);
}

/// sqrt_of that throws NotRepresentable instead of returning nullopt.
template <Scalar S>
S require_sqrt(const S& a, std::string_view what) {
  if (auto r = sqrt_of(a)) return *r;
  throw NotRepresentable("exact backend cannot represent sqrt of " + std::string(what) +
                         "; use the bigfloat backend");
}

/// Integer power by repeated squaring; negative exponents invert.
template <Scalar S>
S pow_int(const S& base, long n) {
  if (n < 0) return S(1) / pow_int(base, -n);
  S result(1);
  S b = base;
  while (n > 0) {
    if (n & 1) result = result * b;
    n >>= 1;
    if (n > 0) b = b * b;
  }
  return result;
}

// --- text -------------------------------------------------------------------

inline std::string real_to_string(const mpq_class& v) { return v.get_str(); }
inline std::string real_to_string(const BigFloat& v) { return v.to_string(); }

inline double real_to_double(const mpq_class& v) { return v.get_d(); }
inline double real_to_double(const BigFloat& v) { return v.to_double(); }

template <class R>
std::string to_string(const Complex<R>& z) {
  if (z.is_real()) return real_to_string(z.real());
  return "[" + real_to_string(z.real()) + ", " + real_to_string(z.imag()) + "]";
}

}  // namespace latticeops

#endif  // LATTICEOPS_SCALAR_HPP
