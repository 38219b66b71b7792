#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "ofplus/errors.hpp"

namespace ofplus {

using Rational = mpq_class;
using Real = boost::multiprecision::mpfr_float;

/// Traits for the two real fields the engine runs over: exact rationals and
/// variable-precision binary floats.
template <class R>
struct field_traits;

template <>
struct field_traits<Rational> {
  static constexpr bool exact = true;

  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static bool near(const Rational& a, const Rational& b) { return a == b; }
  static Rational abs(const Rational& x) { return ::abs(x); }

  // Smaller is a better pivot: keeps intermediate numerators short.
  static std::size_t pivot_cost(const Rational& x) {
    return mpz_sizeinbase(x.get_num_mpz_t(), 2) + mpz_sizeinbase(x.get_den_mpz_t(), 2);
  }

  static std::string to_string(const Rational& x) { return x.get_str(); }
};

template <>
struct field_traits<Real> {
  static constexpr bool exact = false;

  static Real tolerance() { return Real(1e-40); }
  static bool is_zero(const Real& x) { return boost::multiprecision::abs(x) < tolerance(); }
  static bool near(const Real& a, const Real& b) { return is_zero(a - b); }
  static Real abs(const Real& x) { return boost::multiprecision::abs(x); }

  // Larger magnitude is the better pivot; negate so that "smaller is better" holds.
  static double pivot_cost(const Real& x) { return -static_cast<double>(boost::multiprecision::abs(x)); }

  static std::string to_string(const Real& x) {
    std::ostringstream os;
    os << std::setprecision(static_cast<int>(Real::default_precision())) << x;
    return os.str() + "@" + std::to_string(precision_bits()) + "b";
  }

  static unsigned& precision_bits() {
    static unsigned bits = 256;
    return bits;
  }
};

/// Sets the working precision of the float field, in bits.
inline void set_float_precision(unsigned bits) {
  if (bits < 64) throw DomainError("float precision must be at least 64 bits");
  field_traits<Real>::precision_bits() = bits;
  Real::default_precision(static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)));
}

namespace detail {
inline const bool float_precision_ready = (set_float_precision(256), true);
}  // namespace detail

/// A complex number over a real field R. With R = Rational this is the exact
/// scalar of the whole pipeline; with R = Real it is the float fallback.
template <class R>
struct Complex {
  using real_type = R;

  R re{0};
  R im{0};

  Complex() = default;
  Complex(R r) : re(std::move(r)), im(0) {}  // NOLINT: implicit on purpose
  Complex(R r, R i) : re(std::move(r)), im(std::move(i)) {}
  Complex(long v) : re(v), im(0) {}  // NOLINT
  Complex(int v) : re(v), im(0) {}   // NOLINT

  bool is_real() const { return field_traits<R>::is_zero(im); }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    if (!field_traits<R>::is_zero(o.im)) im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    if (!field_traits<R>::is_zero(o.im)) im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) { return *this = *this * o; }
  Complex& operator/=(const Complex& o) { return *this = *this / o; }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator-(const Complex& a) { return Complex(R(-a.re), R(-a.im)); }

  friend Complex operator*(const Complex& a, const Complex& b) {
    const bool ar = field_traits<R>::is_zero(a.im);
    const bool br = field_traits<R>::is_zero(b.im);
    if (ar && br) return Complex(R(a.re * b.re));
    if (ar) return Complex(R(a.re * b.re), R(a.re * b.im));
    if (br) return Complex(R(a.re * b.re), R(a.im * b.re));
    return Complex(R(a.re * b.re - a.im * b.im), R(a.re * b.im + a.im * b.re));
  }

  friend Complex operator/(const Complex& a, const Complex& b) {
    if (field_traits<R>::is_zero(b.re) && field_traits<R>::is_zero(b.im))
      throw DomainError("division by zero");
    if (field_traits<R>::is_zero(b.im)) return Complex(R(a.re / b.re), R(a.im / b.re));
    R d = b.re * b.re + b.im * b.im;
    return Complex(R((a.re * b.re + a.im * b.im) / d), R((a.im * b.re - a.re * b.im) / d));
  }

  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }
};

using Exact = Complex<Rational>;
using Approx = Complex<Real>;

template <class R>
Complex<R> conj(const Complex<R>& z) {
  return Complex<R>(z.re, R(-z.im));
}

/// |z|^2, always in the base field.
template <class R>
R norm2(const Complex<R>& z) {
  return R(z.re * z.re + z.im * z.im);
}

template <class R>
bool is_zero(const Complex<R>& z) {
  return field_traits<R>::is_zero(z.re) && field_traits<R>::is_zero(z.im);
}

template <class R>
bool near(const Complex<R>& a, const Complex<R>& b) {
  return field_traits<R>::near(a.re, b.re) && field_traits<R>::near(a.im, b.im);
}

template <class R>
auto pivot_cost(const Complex<R>& z) {
  if constexpr (field_traits<R>::exact) {
    return field_traits<R>::pivot_cost(z.re) + field_traits<R>::pivot_cost(z.im);
  } else {
    return -static_cast<double>(boost::multiprecision::sqrt(norm2(z)));
  }
}

template <class T>
concept ExactField = field_traits<typename T::real_type>::exact;

// ---------------------------------------------------------------------------
// Text form. Rationals render as "p/q" with q = 1 omitted; a complex value with
// a non-zero imaginary part renders as "a+bi" / "a-bi" / "bi".

inline std::string to_string(const Rational& x) { return x.get_str(); }
inline std::string to_string(const Real& x) { return field_traits<Real>::to_string(x); }

template <class R>
std::string to_string(const Complex<R>& z) {
  if (field_traits<R>::is_zero(z.im)) return to_string(z.re);
  std::string im_abs = to_string(R(field_traits<R>::abs(z.im)));
  const bool neg = z.im < 0;
  if (field_traits<R>::is_zero(z.re)) return (neg ? "-" : "") + im_abs + "i";
  return to_string(z.re) + (neg ? "-" : "+") + im_abs + "i";
}

namespace detail {

inline bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (ch < '0' || ch > '9') return false;
  return true;
}

}  // namespace detail

/// Parses "p", "p/q", or a finite decimal such as "-0.125" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&]() -> Rational { throw ParseError("not a rational number: '" + s + "'"); };
  if (s.empty()) return fail();
  std::string_view body = s;
  bool neg = false;
  if (body.front() == '+' || body.front() == '-') {
    neg = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational out;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!detail::is_digits(num) || !detail::is_digits(den)) return fail();
    mpz_class d(std::string(den), 10);
    if (d == 0) throw ParseError("zero denominator in '" + s + "'");
    out = Rational(mpz_class(std::string(num), 10), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !detail::is_digits(whole)) || (!frac.empty() && !detail::is_digits(frac)) ||
        (whole.empty() && frac.empty()))
      return fail();
    mpz_class scale = 1;
    for (std::size_t n = 0; n < frac.size(); ++n) scale *= 10;
    mpz_class num(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    out = Rational(num, scale);
  } else {
    if (!detail::is_digits(body)) return fail();
    out = Rational(mpz_class(std::string(body), 10));
  }
  out.canonicalize();
  return neg ? Rational(-out) : out;
}

inline std::optional<mpz_class> exact_isqrt(const mpz_class& n) {
  if (n < 0) return std::nullopt;
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  if (r * r != n) return std::nullopt;
  return r;
}

/// Square root of a non-negative rational when it is itself rational.
inline std::optional<Rational> exact_sqrt(const Rational& x) {
  auto n = exact_isqrt(x.get_num());
  auto d = exact_isqrt(x.get_den());
  if (!n || !d) return std::nullopt;
  Rational r(*n, *d);
  r.canonicalize();
  return r;
}

inline Real to_real(const Rational& x) {
  return Real(x.get_num().get_str()) / Real(x.get_den().get_str());
}

inline Approx to_approx(const Exact& z) { return Approx(to_real(z.re), to_real(z.im)); }

/// |z|. Exact only when |z|^2 is a rational square (always so for real z).
template <class R>
R magnitude(const Complex<R>& z) {
  if (z.is_real()) return field_traits<R>::abs(z.re);
  if constexpr (field_traits<R>::exact) {
    if (auto r = exact_sqrt(norm2(z))) return *r;
    throw DomainError("|" + to_string(z) + "| is irrational; use float mode");
  } else {
    return boost::multiprecision::sqrt(norm2(z));
  }
}

/// Parses the real field R from text: rationals/decimals for both fields, and
/// additionally sqrt(x) for the float field.
template <class R>
R parse_real(std::string_view text);

template <>
inline Rational parse_real<Rational>(std::string_view text) {
  if (text.starts_with("sqrt(") && text.ends_with(")")) {
    auto inner = parse_rational(text.substr(5, text.size() - 6));
    if (auto r = exact_sqrt(inner)) return *r;
    throw DomainError("sqrt(" + inner.get_str() + ") is irrational; exact mode cannot represent it");
  }
  return parse_rational(text);
}

template <>
inline Real parse_real<Real>(std::string_view text) {
  if (text.starts_with("sqrt(") && text.ends_with(")")) {
    Real inner = parse_real<Real>(text.substr(5, text.size() - 6));
    if (inner < 0) throw DomainError("sqrt of a negative number");
    return boost::multiprecision::sqrt(inner);
  }
  std::string s(text);
  if (s.find_first_of("eE") != std::string::npos) {
    try {
      return Real(s);
    } catch (const std::exception&) {
      throw ParseError("not a number: '" + s + "'");
    }
  }
  return to_real(parse_rational(s));
}

/// Parses "a", "a+bi", "a-bi", "bi", "i", "-i" over the field R.
template <class R>
Complex<R> parse_scalar(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty scalar");
  if (s.back() != 'i') return Complex<R>(parse_real<R>(s));
  std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not the leading one and not inside sqrt(...).
  std::size_t split = std::string::npos;
  int depth = 0;
  for (std::size_t n = 1; n < body.size(); ++n) {
    char ch = body[n];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && (ch == '+' || ch == '-') && body[n - 1] != 'e' && body[n - 1] != 'E') split = n;
  }
  auto imag_of = [](std::string part) -> R {
    if (part.empty() || part == "+") return R(1);
    if (part == "-") return R(-1);
    return parse_real<R>(part);
  };
  if (split == std::string::npos) return Complex<R>(R(0), imag_of(body));
  return Complex<R>(parse_real<R>(body.substr(0, split)), imag_of(body.substr(split)));
}

}  // namespace ofplus
