/**
 * @file domains.hpp
 * @brief Supported bounded Reinhardt domains and their exact monomial moments.
 *
 * Three families are supported: the unit polydisc, the unit ball and the
 * rational Hartogs triangles {|z1|^(m/n) < |z2| < 1}. For each family the
 * moment
 *
 *     M(c) = \int_\Omega \prod_i |z_i|^{c_i} dV
 *
 * is available in closed form for any rational exponent vector c, and its
 * finiteness reduces to a short list of strict linear inequalities
 * a.c + b > 0 with integer a and b > 0. Every allowability predicate in the
 * library goes through those inequalities, so no floating point is involved
 * in deciding membership.
 */
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bergman/multi_index.hpp"
#include "bergman/rational.hpp"

namespace bergman {

enum class Family { Polydisc, Ball, Hartogs };

/// Strict inequality a.c + b > 0 on a modulus exponent vector c.
struct FinitenessConstraint {
  std::vector<int> a;
  int b = 0;
};

class Domain {
 public:
  static Domain polydisc(int dim);
  static Domain ball(int dim);
  /// Requires m, n >= 1 and gcd(m, n) = 1.
  static Domain hartogs(int m, int n);

  Family family() const { return family_; }
  int dim() const { return dim_; }
  /// Hartogs parameters; both 1 for the other families.
  int m() const { return m_; }
  int n() const { return n_; }

  /// True iff the domain meets the coordinate hyperplane {z_i = 0}.
  bool axis_meets_hyperplane(std::size_t i) const;

  const std::vector<FinitenessConstraint>& finiteness_constraints() const { return constraints_; }

  /// Power of pi carried by every finite moment of this domain.
  int pi_power() const { return family_ == Family::Hartogs ? 2 : dim_; }

  /// Canonical spec string, e.g. "hartogs:1/2".
  std::string spec() const;

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.family_ == b.family_ && a.dim_ == b.dim_ && a.m_ == b.m_ && a.n_ == b.n_;
  }

 private:
  Domain(Family f, int dim, int m, int n);

  Family family_;
  int dim_;
  int m_ = 1;
  int n_ = 1;
  std::vector<FinitenessConstraint> constraints_;
};

struct ParsedDomain {
  Domain domain;
  std::optional<std::string> warning;
};

/// Grammar: `polydisc:<uint>` | `ball:<uint>` | `hartogs:<uint>/<uint>`.
/// Non-coprime Hartogs pairs are reduced, with a warning.
ParsedDomain parse_domain(std::string_view spec);

/// Gamma(num_1)...Gamma(num_k) / (Gamma(den_1)...Gamma(den_j)), rational arguments > 0.
struct GammaRatio {
  std::vector<Rational> num;
  std::vector<Rational> den;
  double log_value() const;
  std::string str() const;
};

/// coeff * pi^pi_power * gamma
struct ExactValue {
  Rational coeff;
  int pi_power = 0;
  std::optional<GammaRatio> gamma;

  double to_double() const;
  double log_value() const;
  std::string str() const;
  /// True when the value is a rational multiple of pi^pi_power.
  bool is_rational_pi() const { return !gamma.has_value(); }
};

/// Result of a moment integral: finite exact value or divergent.
class Moment {
 public:
  static Moment divergent() { return Moment(); }
  static Moment finite(ExactValue v) { return Moment(std::move(v)); }

  bool is_finite() const { return value_.has_value(); }
  bool is_divergent() const { return !value_.has_value(); }
  /// Throws NotIntegrable when divergent.
  const ExactValue& value() const;
  double to_double() const;
  std::string str() const;

 private:
  Moment() = default;
  explicit Moment(ExactValue v) : value_(std::move(v)) {}
  std::optional<ExactValue> value_;
};

/// Exact finiteness of \int prod |z_i|^{c_i} over the domain.
bool modulus_moment_finite(const Domain& d, std::span<const Rational> c);

/// \int prod |z_i|^{c_i} dV for a rational modulus exponent vector c.
Moment modulus_moment(const Domain& d, std::span<const Rational> c);

/// \int |z^alpha|^p dV.
Moment moment(const Domain& d, const MultiIndex& alpha, const Exponent& p);
bool moment_finite(const Domain& d, const MultiIndex& alpha, const Exponent& p);

/// Moment at integer modulus exponents c (used by pairing and projection).
Moment integer_moment(const Domain& d, const MultiIndex& c);

Moment volume(const Domain& d);

/// z^alpha is holomorphic on the domain: alpha_i >= 0 on every axis whose
/// hyperplane meets it.
bool holomorphy_ok(const Domain& d, const MultiIndex& alpha);

/// Reinhardt shadow membership of a modulus vector r.
bool shadow_contains(const Domain& d, std::span<const double> r);
bool shadow_contains(const Domain& d, std::span<const Rational> r);

/// Throws DimensionError unless alpha has the domain dimension.
void require_dim(const Domain& d, const MultiIndex& alpha);

}  // namespace bergman
