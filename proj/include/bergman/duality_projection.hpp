/**
 * @file duality_projection.hpp
 * @brief Exact L^2 pairing and Bergman projection on mixed monomials, plus
 *        the Hoelder and Lyapunov inequalities checked numerically.
 *
 * On a Reinhardt domain the angular integral of z^a conj(z)^b vanishes
 * unless a = b, so every pairing of mixed monomials collapses to a single
 * radial moment at an even integer exponent vector. Those moments are
 * rational multiples of pi^k (k = Domain::pi_power()), which makes the
 * pairing, the projection coefficients and the projection norm ratios
 * exact.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bergman/mixed_monomial.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

/// coeff * pi^pi_power with an exact complex rational coefficient.
struct ExactComplex {
  ComplexRational coeff;
  int pi_power = 0;

  std::complex<double> to_complex() const;
  std::string str() const;
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.coeff == b.coeff && (a.coeff.is_zero() || a.pi_power == b.pi_power);
  }
};

/// <f, g> = \int f conj(g) dV for arbitrary mixed monomial sums. Throws
/// NotIntegrable when some cross term |f_i g_j| is not integrable.
ExactComplex inner(const Domain& d, const MixedMonomialSum& f, const MixedMonomialSum& g);

/// Phi(g)(f) = <f, g> with g holomorphic.
ExactComplex pairing(const Domain& d, const MixedMonomialSum& f, const LaurentPoly& g);

/// Per-term outcome of the projection.
struct ProjectedTerm {
  MixedTerm input;
  MultiIndex delta;  // alpha - gamma
  /// M(2 alpha) / M(2 delta); absent when z^delta is not in A^2.
  std::optional<Rational> multiplier;
};

/// Throws NotIntegrable unless every term lies in L^2.
std::vector<ProjectedTerm> projection_terms(const Domain& d, const MixedMonomialSum& f);

/// B(c z^a conj(z)^g) = c M(2a)/M(2d) z^d for d = a - g in S(A^2), else 0.
LaurentPoly project(const Domain& d, const MixedMonomialSum& f);

struct ProjectionRatio {
  bool divergent = false;
  double ratio = 0.0;  // ||B f||_p / ||f||_p when finite
  Rational multiplier;  // coefficient of z^delta in B f (0 when killed)
  MultiIndex delta;
};

/// Norm ratio for f = z^alpha conj(z)^gamma. Throws NotIntegrable unless f
/// lies in L^2 and in L^p.
ProjectionRatio projection_ratio(const Domain& d, const MultiIndex& alpha, const MultiIndex& gamma,
                                 const Exponent& p);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  bool exact = false;  // every norm came from closed-form moments
  int retries = 0;     // quadrature refinements spent on a near violation
};

inline constexpr double kInequalityTolerance = 1e-9;

/// ||f||_{p_theta} <= ||f||_p^{1-theta} ||f||_q^theta, 1/p_theta = (1-theta)/p + theta/q.
/// Throws DomainError unless 0 < theta < 1 and NotIntegrable unless f lies
/// in A^p and A^q.
InequalityCheck lyapunov_check(const Domain& d, const LaurentPoly& f, const Exponent& p, const Exponent& q,
                               const Rational& theta, const QuadConfig& cfg = {});

/// |<f, g>| <= ||f||_p ||g||_q with q the conjugate of p.
InequalityCheck holder_check(const Domain& d, const LaurentPoly& f, const LaurentPoly& g, const Exponent& p,
                             const QuadConfig& cfg = {});

/// Exact ||f||_p for holomorphic f when available: a single monomial for any
/// p, or any Laurent polynomial at p = 2. nullopt otherwise.
std::optional<double> exact_norm(const Domain& d, const LaurentPoly& f, const Exponent& p);

/// First gamma (lexicographic) in S(A^q) \ S(A^p) inside the window, q the
/// conjugate of p >= 2; such e_gamma pairs to zero with every monomial of A^p.
std::optional<MultiIndex> injectivity_witness_scan(const Domain& d, const Exponent& p, int radius);

}  // namespace bergman
