#include "bergman/rational.hpp"

#include <cctype>
#include <cmath>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
  std::string_view num_digits = num;
  if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+'))
    num_digits.remove_prefix(1);
  if (!all_digits(num_digits)) throw ParseError("malformed rational '" + std::string(text) + "'");
  if (slash != std::string_view::npos && !all_digits(den))
    throw ParseError("malformed rational '" + std::string(text) + "'");

  std::string num_str(num);
  if (!num_str.empty() && num_str.front() == '+') num_str.erase(0, 1);
  mpz_class n(num_str, 10);
  mpz_class d = 1;
  if (slash != std::string_view::npos) d = mpz_class(std::string(den), 10);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(10); }

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite coefficient");
  return Rational(x);
}

Exponent::Exponent(Rational value) : value_(std::move(value)) {
  value_.canonicalize();
  if (value_ <= 0) throw DomainError("exponent must be positive, got " + to_string(value_));
}

Rational make_rational(long num, long den) {
  if (den == 0) throw DomainError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Exponent::Exponent(long num, long den) : Exponent(make_rational(num, den)) {}

Exponent parse_exponent(std::string_view text) {
  auto r = parse_rational(text);
  if (r <= 0) throw ParseError("exponent must be positive: '" + std::string(text) + "'");
  return Exponent(r);
}

Exponent conjugate_exponent(const Exponent& p) {
  if (p.value() <= 1)
    throw DomainError("conjugate exponent requires p > 1, got " + p.str());
  return Exponent(Rational(p.value() / (p.value() - 1)));
}

ComplexRational complex_from_double(std::complex<double> z) {
  return {rational_from_double(z.real()), rational_from_double(z.imag())};
}

}  // namespace bergman
