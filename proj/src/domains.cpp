#include "bergman/domains.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

Rational factorial(long k) {
  mpz_class f = 1;
  for (long i = 2; i <= k; ++i) f *= i;
  return Rational(f);
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

// Non-negative decimal integer, bit-exact grammar (no sign, no spaces).
int parse_uint(std::string_view s, std::string_view whole) {
  if (s.empty() || s.size() > 9) throw ParseError("malformed domain spec '" + std::string(whole) + "'");
  int v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw ParseError("malformed domain spec '" + std::string(whole) + "'");
    v = v * 10 + (ch - '0');
  }
  return v;
}

template <typename T>
Rational rat(const T& v) {
  return Rational(v);
}

}  // namespace

Domain::Domain(Family f, int dim, int m, int n) : family_(f), dim_(dim), m_(m), n_(n) {
  if (f == Family::Hartogs) {
    constraints_.push_back({{1, 0}, 2});
    constraints_.push_back({{n, m}, 2 * (m + n)});
  } else {
    for (int i = 0; i < dim; ++i) {
      std::vector<int> a(dim, 0);
      a[i] = 1;
      constraints_.push_back({std::move(a), 2});
    }
  }
}

Domain Domain::polydisc(int dim) {
  if (dim <= 0) throw DimensionError("polydisc dimension must be positive");
  return Domain(Family::Polydisc, dim, 1, 1);
}

Domain Domain::ball(int dim) {
  if (dim <= 0) throw DimensionError("ball dimension must be positive");
  return Domain(Family::Ball, dim, 1, 1);
}

Domain Domain::hartogs(int m, int n) {
  if (m < 1 || n < 1) throw DomainError("Hartogs triangle requires m, n >= 1");
  if (std::gcd(m, n) != 1) throw DomainError("Hartogs triangle requires gcd(m, n) = 1");
  return Domain(Family::Hartogs, 2, m, n);
}

bool Domain::axis_meets_hyperplane(std::size_t i) const {
  if (i >= static_cast<std::size_t>(dim_)) throw DimensionError("axis out of range");
  // {z2 = 0} misses the Hartogs triangle since |z2| > |z1|^(m/n) >= 0.
  return !(family_ == Family::Hartogs && i == 1);
}

std::string Domain::spec() const {
  switch (family_) {
    case Family::Polydisc: return "polydisc:" + std::to_string(dim_);
    case Family::Ball: return "ball:" + std::to_string(dim_);
    case Family::Hartogs: return "hartogs:" + std::to_string(m_) + "/" + std::to_string(n_);
  }
  return {};
}

ParsedDomain parse_domain(std::string_view spec) {
  auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw ParseError("malformed domain spec '" + std::string(spec) + "'");
  std::string_view family = spec.substr(0, colon);
  std::string_view rest = spec.substr(colon + 1);
  if (family == "polydisc" || family == "ball") {
    int dim = parse_uint(rest, spec);
    if (dim <= 0) throw DimensionError("dimension must be positive in '" + std::string(spec) + "'");
    return {family == "polydisc" ? Domain::polydisc(dim) : Domain::ball(dim), std::nullopt};
  }
  if (family == "hartogs") {
    auto slash = rest.find('/');
    if (slash == std::string_view::npos) throw ParseError("malformed domain spec '" + std::string(spec) + "'");
    int m = parse_uint(rest.substr(0, slash), spec);
    int n = parse_uint(rest.substr(slash + 1), spec);
    if (m <= 0 || n <= 0) throw DimensionError("Hartogs parameters must be positive in '" + std::string(spec) + "'");
    int g = std::gcd(m, n);
    std::optional<std::string> warning;
    if (g != 1) {
      warning = "hartogs:" + std::to_string(m) + "/" + std::to_string(n) + " reduced to hartogs:" +
                std::to_string(m / g) + "/" + std::to_string(n / g);
    }
    return {Domain::hartogs(m / g, n / g), warning};
  }
  throw ParseError("unknown domain family '" + std::string(family) + "'");
}

double GammaRatio::log_value() const {
  double s = 0.0;
  for (const auto& a : num) s += std::lgamma(a.get_d());
  for (const auto& b : den) s -= std::lgamma(b.get_d());
  return s;
}

std::string GammaRatio::str() const {
  std::string s;
  for (const auto& a : num) s += "Gamma(" + to_string(a) + ")";
  if (s.empty()) s = "1";
  if (!den.empty()) {
    s += "/(";
    for (std::size_t i = 0; i < den.size(); ++i) s += (i ? "*Gamma(" : "Gamma(") + to_string(den[i]) + ")";
    s += ")";
  }
  return s;
}

double ExactValue::log_value() const {
  double lv = std::log(coeff.get_d()) + pi_power * std::log(std::numbers::pi);
  if (gamma) lv += gamma->log_value();
  return lv;
}

double ExactValue::to_double() const {
  if (!gamma) return coeff.get_d() * std::pow(std::numbers::pi, pi_power);
  return std::exp(log_value());
}

std::string ExactValue::str() const {
  std::string s = to_string(coeff);
  if (pi_power == 1) s += "*pi";
  if (pi_power > 1) s += "*pi^" + std::to_string(pi_power);
  if (gamma) s += "*" + gamma->str();
  return s;
}

const ExactValue& Moment::value() const {
  if (!value_) throw NotIntegrable("moment is divergent");
  return *value_;
}

double Moment::to_double() const {
  return value_ ? value_->to_double() : std::numeric_limits<double>::infinity();
}

std::string Moment::str() const { return value_ ? value_->str() : std::string("divergent"); }

bool modulus_moment_finite(const Domain& d, std::span<const Rational> c) {
  if (c.size() != static_cast<std::size_t>(d.dim())) throw DimensionError("exponent vector length mismatch");
  for (const auto& con : d.finiteness_constraints()) {
    Rational s = con.b;
    for (std::size_t i = 0; i < c.size(); ++i) s += con.a[i] * c[i];
    if (s <= 0) return false;
  }
  return true;
}

Moment modulus_moment(const Domain& d, std::span<const Rational> c) {
  if (!modulus_moment_finite(d, c)) return Moment::divergent();
  ExactValue v;
  v.pi_power = d.pi_power();
  switch (d.family()) {
    case Family::Polydisc: {
      // prod_i 2 pi / (c_i + 2)
      Rational coeff = 1;
      for (const auto& ci : c) coeff *= Rational(2) / (ci + 2);
      v.coeff = coeff;
      break;
    }
    case Family::Hartogs: {
      // (2 pi)^2 m / [(c1 + 2)(n(c1 + 2) + m(c2 + 2))]
      const int m = d.m(), n = d.n();
      Rational s1 = c[0] + 2;
      Rational s2 = n * s1 + m * (c[1] + 2);
      v.coeff = Rational(4 * m) / (s1 * s2);
      break;
    }
    case Family::Ball: {
      // pi^n prod_i Gamma(c_i/2 + 1) / Gamma(n + sum c_i/2 + 1)
      Rational coeff = 1;
      GammaRatio g;
      Rational b = d.dim() + 1;
      for (const auto& ci : c) {
        Rational a = ci / 2 + 1;
        b += ci / 2;
        if (is_integer(a))
          coeff *= factorial(a.get_num().get_si() - 1);
        else
          g.num.push_back(a);
      }
      if (is_integer(b))
        coeff /= factorial(b.get_num().get_si() - 1);
      else
        g.den.push_back(b);
      v.coeff = coeff;
      if (!g.num.empty() || !g.den.empty()) v.gamma = std::move(g);
      break;
    }
  }
  v.coeff.canonicalize();
  return Moment::finite(std::move(v));
}

void require_dim(const Domain& d, const MultiIndex& alpha) {
  if (alpha.size() != static_cast<std::size_t>(d.dim()))
    throw DimensionError("multi-index " + alpha.str() + " has wrong length for " + d.spec());
}

namespace {
std::vector<Rational> scaled(const MultiIndex& alpha, const Rational& p) {
  std::vector<Rational> c;
  c.reserve(alpha.size());
  for (int a : alpha) c.emplace_back(p * a);
  return c;
}
}  // namespace

Moment moment(const Domain& d, const MultiIndex& alpha, const Exponent& p) {
  require_dim(d, alpha);
  auto c = scaled(alpha, p.value());
  return modulus_moment(d, c);
}

bool moment_finite(const Domain& d, const MultiIndex& alpha, const Exponent& p) {
  require_dim(d, alpha);
  auto c = scaled(alpha, p.value());
  return modulus_moment_finite(d, c);
}

Moment integer_moment(const Domain& d, const MultiIndex& c) {
  require_dim(d, c);
  return modulus_moment(d, scaled(c, Rational(1)));
}

Moment volume(const Domain& d) { return moment(d, MultiIndex(d.dim()), Exponent(2, 1)); }

bool holomorphy_ok(const Domain& d, const MultiIndex& alpha) {
  require_dim(d, alpha);
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (d.axis_meets_hyperplane(i) && alpha[i] < 0) return false;
  return true;
}

namespace {
template <typename T>
bool shadow_contains_impl(const Domain& d, std::span<const T> r) {
  if (r.size() != static_cast<std::size_t>(d.dim())) throw DimensionError("radius vector length mismatch");
  for (const auto& ri : r)
    if (ri < 0) throw DomainError("negative radius");
  switch (d.family()) {
    case Family::Polydisc:
      for (const auto& ri : r)
        if (!(ri < 1)) return false;
      return true;
    case Family::Ball: {
      T s = 0;
      for (const auto& ri : r) s += ri * ri;
      return s < 1;
    }
    case Family::Hartogs: {
      if (!(r[1] < 1)) return false;
      if constexpr (std::is_same_v<T, double>) {
        return std::pow(r[0], d.m()) < std::pow(r[1], d.n());
      } else {
        Rational lhs = 1, rhs = 1;
        for (int i = 0; i < d.m(); ++i) lhs *= r[0];
        for (int i = 0; i < d.n(); ++i) rhs *= r[1];
        return lhs < rhs;
      }
    }
  }
  return false;
}
}  // namespace

bool shadow_contains(const Domain& d, std::span<const double> r) { return shadow_contains_impl<double>(d, r); }

bool shadow_contains(const Domain& d, std::span<const Rational> r) {
  return shadow_contains_impl<Rational>(d, r);
}

}  // namespace bergman
