/**
 * @file rational.hpp
 * @brief Exact rational scalars used by every membership predicate.
 *
 * Rational is GMP's mpq_class. Exponent is a strictly positive rational
 * used for the Lebesgue exponent p; ComplexRational carries exact complex
 * coefficients of mixed monomial sums so that projection identities can be
 * checked with zero tolerance.
 */
#pragma once

#include <gmpxx.h>

#include <complex>
#include <compare>
#include <string>
#include <string_view>

namespace bergman {

using Rational = mpq_class;

/// Parses `<int>` or `<int>/<uint>` (denominator > 0). Result is canonical.
Rational parse_rational(std::string_view text);

/// num/den in canonical form (mpq_class(num, den) is left unreduced).
Rational make_rational(long num, long den);

/// "num/den", or "num" when the denominator is one.
std::string to_string(const Rational& r);

/// Exact binary value of a finite double.
Rational rational_from_double(double x);

inline double to_double(const Rational& r) { return r.get_d(); }

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// Strictly positive rational exponent p, kept in lowest terms.
class Exponent {
 public:
  explicit Exponent(Rational value);
  Exponent(long num, long den);

  const Rational& value() const { return value_; }
  double as_double() const { return value_.get_d(); }
  std::string str() const { return to_string(value_); }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  Rational value_;
};

Exponent parse_exponent(std::string_view text);

/// q = p/(p-1). Throws DomainError when p <= 1.
Exponent conjugate_exponent(const Exponent& p);

/// Exact complex number with rational parts.
struct ComplexRational {
  Rational re{0};
  Rational im{0};

  ComplexRational() = default;
  ComplexRational(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  ComplexRational conj() const { return {re, -im}; }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  ComplexRational& operator+=(const ComplexRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ComplexRational operator*(const ComplexRational& a, const Rational& s) {
    return {a.re * s, a.im * s};
  }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

ComplexRational complex_from_double(std::complex<double> z);

}  // namespace bergman
