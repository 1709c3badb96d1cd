#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bergman/duality_projection.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

using MomentFn = std::function<Moment(const Domain&, const MultiIndex&, const Exponent&)>;

/// The library moment formula, as a MomentFn.
Moment reference_moment(const Domain& d, const MultiIndex& alpha, const Exponent& p);

struct BootstrapStats {
  int finite = 0;
  int divergent = 0;
  double worst_relative_error = 0.0;
  std::string worst_at;
  int divergence_misses = 0;  // divergent moments whose probe did not report Diverging
  int finite_misses = 0;      // finite moments off by more than 1e-8 relative
  int tenfold_misses = 0;     // divergent moments without >= 10x growth at every level
  /// Misses whose exponent vector lies on a finiteness boundary a.c + b = 0,
  /// where divergence is logarithmic and growth per level is additive.
  int tenfold_misses_on_boundary = 0;
  bool passed() const { return finite_misses == 0 && divergence_misses == 0; }
};

inline constexpr double kBootstrapTolerance = 1e-8;

/// The exponents {1, 3/2, 2, 5/2, 3, 4}.
std::vector<Exponent> bootstrap_exponents();

/// Compares `moments` against quadrature over the box |alpha_i| <= radius.
BootstrapStats bootstrap(const Domain& d, const std::vector<Exponent>& ps, int radius, const QuadConfig& cfg,
                         const MomentFn& moments = reference_moment);

enum class VerifyLevel { Quick, Full };

struct VerifyOptions {
  std::vector<Domain> domains;
  VerifyLevel level = VerifyLevel::Quick;
  std::uint64_t seed = 0;
  QuadConfig quad;
  MomentFn moments = reference_moment;
};

struct CheckOutcome {
  std::string suite;
  std::string domain;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  bool bootstrap_passed = false;
  std::vector<CheckOutcome> checks;
  bool passed() const;
};

/// Bootstrap first; the remaining suites run only when it passes.
VerifyReport verify(const VerifyOptions& opts);

// Random inputs shared by verify and the tests.

/// Term count in [1, max_terms]; every term lies in L^2 of d.
MixedMonomialSum random_mixed(const Domain& d, std::mt19937_64& rng, int radius, int max_terms);

/// Terms drawn from S(A^p) and S(A^q) inside the window.
LaurentPoly random_laurent(const Domain& d, std::mt19937_64& rng, const Exponent& p, const Exponent& q,
                           int radius, int max_terms);

/// Uniform modulus vector in the shadow scaled to stay inside radius 0.7
/// (ball: Euclidean norm, hartogs: |z2| and |z1|/|z2|^(n/m), polydisc: each
/// coordinate), with uniform phases.
std::vector<std::complex<double>> random_point(const Domain& d, std::mt19937_64& rng, double cap = 0.7);

}  // namespace bergman
