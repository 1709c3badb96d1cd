#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "bergman/quadrature.hpp"

namespace bergman {

// Convention used throughout: K(z, w) = sum_alpha z^alpha conj(w)^alpha / ||e_alpha||^2,
// holomorphic in z, so that f(w) = <f, K(., w)>.

struct KernelTerm {
  MultiIndex alpha;
  Rational inv_coeff;  // 1/||e_alpha||^2 = inv_coeff * pi^(-inv_pi_power)
  double weight;       // the same value as a double
};

/// Truncated monomial expansion of the kernel over S(A^2) in the box |alpha_i| <= radius.
struct KernelSeries {
  Domain domain;
  int radius = 0;
  int inv_pi_power = 0;
  std::vector<KernelTerm> terms;  // lexicographic

  /// Summed in term order; no domain membership check.
  std::complex<double> evaluate(Point z, Point w) const;
};

KernelSeries kernel_series(const Domain& d, int radius);

/// Throws DimensionError or PointOutsideDomain.
void require_point(const Domain& d, Point z);

std::complex<double> kernel_truncated(const Domain& d, Point z, Point w, int radius);

bool has_closed_form(const Domain& d);

struct KernelValue {
  std::complex<double> value;
  std::optional<std::string> warning;  // near-singular denominator
};

/// Polydisc, ball and hartogs:1/1. Throws UnsupportedDomain otherwise.
KernelValue kernel_closed_form(const Domain& d, Point z, Point w);

struct ReproduceResult {
  ComplexRational value;     // <e_alpha, K_N(., z)>
  ComplexRational expected;  // z^alpha
  bool exact_zero = false;
  double residual = 0.0;
};

/// Pairs e_alpha against the truncated kernel in exact arithmetic, with z
/// taken as the exact binary value of its double components. Throws
/// DomainError unless alpha is in S(A^2) and inside the window.
ReproduceResult reproduce_check(const Domain& d, const MultiIndex& alpha, Point z, int radius);

struct DensityResult {
  double residual = 0.0;  // clamped at 0
  double raw = 0.0;       // before clamping
  double norm_sq = 0.0;   // ||e_alpha||^2
  double condition = 0.0;
  bool clamped = false;
};

inline constexpr double kMaxGramCondition = 1e12;
inline constexpr int kSeriesFallbackRadius = 40;

/// Squared A^2 distance from e_alpha to span{K(., z_i)}. The Gram matrix uses
/// the closed form when available, else the series of radius 40. Throws
/// IllConditioned above condition 1e12, DomainError on repeated points.
DensityResult density_residual(const Domain& d, const MultiIndex& alpha,
                               const std::vector<std::vector<std::complex<double>>>& points);

struct KernelNormEstimate {
  bool diverging = false;
  double value = 0.0;  // ||K(., z)||_p when finite
  /// Cut-off integrals of |K|^p grew at least tenfold at every level.
  bool tenfold_growth = false;
  ProbeResult probe;
};

/// ||K(., z)||_p by corner-cutoff quadrature. Throws Inconclusive when the
/// cut-off sequence neither stabilizes nor diverges.
KernelNormEstimate kernel_pnorm_estimate(const Domain& d, Point z, const Exponent& p, int radius,
                                         const QuadConfig& cfg = {});

}  // namespace bergman
