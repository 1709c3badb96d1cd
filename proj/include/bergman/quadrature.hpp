/**
 * @file quadrature.hpp
 * @brief Tensor quadrature over Reinhardt domains in shadow-polar coordinates.
 *
 * A point of the domain is written z_i = r_i e^{i theta_i}; the modulus
 * vector r ranges over the Reinhardt shadow, which each family maps from
 * the unit cube:
 *
 *   polydisc  r_i = u_i
 *   ball      t_i = r_i^2 on the simplex, t_1 = u_1, t_k = prod_{j<k}(1-u_j) u_k
 *   hartogs   r_2 = v, r_1 = u v^{n/m}
 *
 * Each cube axis uses a double-exponential (tanh-sinh) rule, which keeps
 * algebraic endpoint singularities u^beta (beta > -1) in the exponentially
 * convergent class. Angles use the uniform trapezoid rule, exact for
 * trigonometric polynomials below the declared bandwidth.
 *
 * A positive corner cutoff c removes [0, c) at every cube end where a
 * coordinate modulus can vanish; the remaining half interval [c, 1/2] keeps
 * its own tanh-sinh rule, whose node clustering resolves the scale c.
 * Sums are accumulated as logarithms, so cut-off integrals of divergent
 * integrands may exceed the double range. Divergence probing compares the
 * cut-off integrals over c in {1e-2, 1e-4, 1e-6, ...}.
 */
#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bergman/domains.hpp"
#include "bergman/mixed_monomial.hpp"

namespace bergman {

using Point = std::span<const std::complex<double>>;

struct QuadConfig {
  int radial_nodes = 64;  // per cube axis and per piece
  int angular_nodes = 0;  // per angle; 0 selects 2*bandwidth + 4
  double corner_cutoff = 0.0;
  int refinement_levels = 3;
  double tolerance = 1e-9;

  /// Throws DomainError on node counts < 4, cutoff outside [0, 1/2) or
  /// refinement_levels < 2.
  void validate() const;
  QuadConfig scaled_nodes(int factor) const;
};

/// Real integrand g(z) >= 0 on the domain, evaluated as log g. The second
/// argument carries log|z_i|, exact even where |z_i| underflows.
struct Integrand {
  std::function<double(Point, std::span<const double>)> log_eval;
  /// Exact trigonometric degree in each angle; 0 means angle independent.
  /// nullopt: not a trigonometric polynomial (angular_hint sizes the rule).
  std::optional<int> bandwidth;
  int angular_hint = 0;
  /// Axes whose angle the integrand does not depend on (empty: none).
  std::vector<bool> angle_free;

  /// prod_i |z_i|^{c_i}
  static Integrand modulus_monomial(std::vector<double> c);
  /// |f|^p for a mixed monomial sum f.
  static Integrand modulus_power(const MixedMonomialSum& f, double p);
  /// Wraps a plain value function g(z).
  static Integrand from_value(std::function<double(Point)> g, std::optional<int> bandwidth, int angular_hint = 8);
};

/// Complex-valued function whose L^p norm is requested.
struct Function {
  std::function<std::complex<double>(Point)> eval;
  /// Trigonometric degree of f itself; nullopt when unknown.
  std::optional<int> bandwidth;
  /// f is a single mixed monomial, so |f| is angle independent.
  bool single_term = false;

  static Function from(const MixedMonomialSum& f);
};

struct QuadResult {
  double value;
  double error_estimate;  // |I(h) - I(h/2)|
};

/// Tensor rule at the configured node counts and cutoff; the error estimate
/// compares against the rule with halved step. When it exceeds
/// tolerance * |value| the node counts are doubled once more.
QuadResult integrate(const Domain& d, const Integrand& g, const QuadConfig& cfg);

/// (integral |f|^p)^(1/p).
double lp_norm(const Domain& d, const Function& f, double p, const QuadConfig& cfg);

/// Several exponents from one pass over the nodes.
std::vector<double> lp_norms(const Domain& d, const Function& f, std::span<const double> ps, const QuadConfig& cfg);

enum class ProbeVerdict { Stable, Diverging, Inconclusive };

struct ProbeResult {
  ProbeVerdict verdict;
  std::vector<double> cutoffs;
  std::vector<double> integrals;  // integral of g over the cut-off domain, per cutoff (may be inf)
  std::vector<double> log_integrals;
  std::vector<double> growth;     // integrals[k+1] / integrals[k]
  std::vector<double> increment_ratios;
  double value;  // full integral (cutoff 0) when stable, else last integral
};

/// Cut-off sequence for integrand g and its classification. Diverging when
/// successive increments do not decay (ratio >= 0.9: power-law or
/// logarithmic growth); stable when they decay geometrically or vanish.
ProbeResult probe_integral(const Domain& d, const Integrand& g, const QuadConfig& cfg);

struct DivergenceProbe {
  bool diverging;
  std::vector<double> sequence;  // lp norms per cutoff
  double value;                  // lp norm, meaningful when not diverging
  ProbeResult raw;
};

/// Corner-cutoff refinement of ||f||_p. Throws Inconclusive when neither
/// signature appears.
DivergenceProbe divergence_probe(const Domain& d, const Function& f, double p, const QuadConfig& cfg);

}  // namespace bergman
