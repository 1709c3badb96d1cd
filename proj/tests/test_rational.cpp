#include <random>

#include "bergman/errors.hpp"
#include "bergman/multi_index.hpp"
#include "bergman/rational.hpp"
#include "doctest.h"

using namespace bergman;

TEST_CASE("parse_rational accepts integers and fractions in canonical form") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-7") == -7);
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(parse_rational("-10/5")) == "-2");
  CHECK(to_string(parse_rational("0/9")) == "0");
}

TEST_CASE("make_rational reduces to lowest terms") {
  Rational r = make_rational(22, 10);
  CHECK(r.get_num() == 11);
  CHECK(r.get_den() == 5);
  CHECK(make_rational(3, -6) == Rational(-1, 2));
  CHECK(make_rational(2, 20) + make_rational(1, 10) == Rational(1, 5));
  CHECK_THROWS_AS(make_rational(1, 0), DomainError);
}

TEST_CASE("parse_rational rejects malformed text") {
  for (const char* bad : {"", "1/0", "1/", "/2", "a", "1.5", "1/-2", " 1", "1 ", "1//2", "+"})
    CHECK_THROWS_AS(parse_rational(bad), ParseError);
}

TEST_CASE("exponents must be strictly positive") {
  CHECK(parse_exponent("5/2").value() == Rational(5, 2));
  CHECK_THROWS_AS(parse_exponent("0"), Error);
  CHECK_THROWS_AS(parse_exponent("-1/2"), Error);
  CHECK(Exponent(4, 6) == Exponent(2, 3));
  CHECK(Exponent(3, 2) < Exponent(2, 1));
}

TEST_CASE("conjugate exponent examples") {
  CHECK(conjugate_exponent(Exponent(2, 1)) == Exponent(2, 1));
  CHECK(conjugate_exponent(Exponent(4, 1)) == Exponent(4, 3));
  CHECK(conjugate_exponent(Exponent(3, 2)) == Exponent(3, 1));
  CHECK_THROWS_AS(conjugate_exponent(Exponent(1, 1)), DomainError);
  CHECK_THROWS_AS(conjugate_exponent(Exponent(1, 2)), DomainError);
}

TEST_CASE("conjugation is an exact involution and satisfies 1/p + 1/q = 1") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(2, 400), den(1, 200);
  for (int t = 0; t < 2000; ++t) {
    long a = num(rng), b = den(rng);
    if (a <= b) continue;
    Exponent p(a, b);
    Exponent q = conjugate_exponent(p);
    CHECK(conjugate_exponent(q) == p);
    CHECK(1 / p.value() + 1 / q.value() == 1);
  }
}

TEST_CASE("rational_from_double is the exact binary value") {
  CHECK(rational_from_double(0.5) == Rational(1, 2));
  CHECK(rational_from_double(-0.375) == Rational(-3, 8));
  Rational r = rational_from_double(0.1);
  CHECK(r != Rational(1, 10));
  CHECK(r.get_d() == 0.1);
  CHECK_THROWS(rational_from_double(std::nan("")));
}

TEST_CASE("complex rational arithmetic") {
  ComplexRational a(Rational(1, 2), Rational(3)), b(Rational(-2), Rational(1, 3));
  ComplexRational p = a * b;
  CHECK(p.re == Rational(1, 2) * -2 - 3 * Rational(1, 3));
  CHECK(p.im == Rational(1, 2) * Rational(1, 3) + 3 * -2);
  CHECK((a + b) - b == a);
  CHECK(a.conj().conj() == a);
  CHECK((a - a).is_zero());
  CHECK(complex_from_double({0.25, -1.5}) == ComplexRational(Rational(1, 4), Rational(-3, 2)));
}

TEST_CASE("multi-index order and box enumeration") {
  CHECK(MultiIndex{0, -1} < MultiIndex{0, 0});
  CHECK(MultiIndex{-1, 5} < MultiIndex{0, -5});
  CHECK((MultiIndex{1, 2} + MultiIndex{-3, 1}) == MultiIndex{-2, 3});
  CHECK(MultiIndex{2, -3}.max_abs() == 3);
  CHECK(MultiIndex{0, 0}.is_zero());
  CHECK(MultiIndex{2, 3}.str() == "(2,3)");

  std::vector<MultiIndex> seen;
  for_each_in_box(2, 2, [&](const MultiIndex& a) { seen.push_back(a); });
  CHECK(seen.size() == 25);
  CHECK(std::is_sorted(seen.begin(), seen.end()));
  CHECK(seen.front() == MultiIndex{-2, -2});
  CHECK(seen.back() == MultiIndex{2, 2});
}
