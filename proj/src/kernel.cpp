#include "bergman/kernel.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "bergman/duality_projection.hpp"
#include "bergman/errors.hpp"
#include "bergman/index_sets.hpp"

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSingularGuard = 1e-12;
const Exponent kTwo(2, 1);

// x^k for k in [-radius, radius], stored at k + radius.
std::vector<std::complex<double>> power_table(std::complex<double> x, int radius, bool need_negative) {
  std::vector<std::complex<double>> t(2 * radius + 1);
  t[radius] = 1.0;
  for (int k = 1; k <= radius; ++k) t[radius + k] = t[radius + k - 1] * x;
  if (need_negative) {
    std::complex<double> inv = 1.0 / x;
    for (int k = 1; k <= radius; ++k) t[radius - k] = t[radius - k + 1] * inv;
  }
  return t;
}

ComplexRational exact_pow(const ComplexRational& z, int k) {
  ComplexRational base = z;
  if (k < 0) {
    Rational n2 = z.re * z.re + z.im * z.im;
    if (n2 == 0) throw DomainError("negative power of zero");
    base = ComplexRational(Rational(z.re / n2), Rational(-z.im / n2));
    k = -k;
  }
  ComplexRational r(Rational(1));
  while (k) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

std::complex<double> monomial_value(Point z, const MultiIndex& alpha) {
  std::complex<double> v = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) v *= std::pow(z[i], alpha[i]);
  return v;
}

}  // namespace

KernelSeries kernel_series(const Domain& d, int radius) {
  if (radius < 0) throw DomainError("series radius must be non-negative");
  KernelSeries s{d, radius, d.pi_power(), {}};
  for_each_in_box(d.dim(), radius, [&](const MultiIndex& a) {
    if (!member(d, a, kTwo)) return;
    Moment m = moment(d, a, kTwo);
    Rational inv = 1 / m.value().coeff;
    s.terms.push_back({a, inv, inv.get_d() * std::pow(kPi, -s.inv_pi_power)});
  });
  return s;
}

std::complex<double> KernelSeries::evaluate(Point z, Point w) const {
  const int n = domain.dim();
  std::vector<std::vector<std::complex<double>>> pw(n);
  for (int i = 0; i < n; ++i) {
    std::complex<double> x = z[i] * std::conj(w[i]);
    pw[i] = power_table(x, radius, !domain.axis_meets_hyperplane(i) && x != 0.0);
  }
  std::complex<double> sum = 0.0;
  for (const KernelTerm& t : terms) {
    std::complex<double> v = t.weight;
    for (int i = 0; i < n; ++i) v *= pw[i][t.alpha[i] + radius];
    sum += v;
  }
  return sum;
}

void require_point(const Domain& d, Point z) {
  if (z.size() != static_cast<std::size_t>(d.dim()))
    throw DimensionError("point has " + std::to_string(z.size()) + " coordinates, " + d.spec() + " needs " +
                         std::to_string(d.dim()));
  std::vector<double> r;
  for (auto zi : z) {
    if (!std::isfinite(zi.real()) || !std::isfinite(zi.imag())) throw PointOutsideDomain("non-finite coordinate");
    r.push_back(std::abs(zi));
  }
  if (!shadow_contains(d, r)) throw PointOutsideDomain("point lies outside " + d.spec());
}

std::complex<double> kernel_truncated(const Domain& d, Point z, Point w, int radius) {
  require_point(d, z);
  require_point(d, w);
  return kernel_series(d, radius).evaluate(z, w);
}

bool has_closed_form(const Domain& d) {
  return d.family() != Family::Hartogs || (d.m() == 1 && d.n() == 1);
}

namespace {

// Closed form without membership checks; `smallest` receives the smallest
// denominator modulus.
std::complex<double> closed_form_value(const Domain& d, Point z, Point w, double& smallest) {
  const int n = d.dim();
  smallest = 1.0;
  switch (d.family()) {
    case Family::Polydisc: {
      std::complex<double> v = 1.0;
      for (int i = 0; i < n; ++i) {
        std::complex<double> den = 1.0 - z[i] * std::conj(w[i]);
        smallest = std::min(smallest, std::abs(den));
        v /= kPi * den * den;
      }
      return v;
    }
    case Family::Ball: {
      std::complex<double> ip = 0.0;
      for (int i = 0; i < n; ++i) ip += z[i] * std::conj(w[i]);
      std::complex<double> den = 1.0 - ip;
      smallest = std::abs(den);
      return std::tgamma(n + 1.0) / std::pow(kPi, n) * std::pow(den, -(n + 1));
    }
    case Family::Hartogs: {
      std::complex<double> x = z[0] * std::conj(w[0]);
      std::complex<double> y = z[1] * std::conj(w[1]);
      std::complex<double> a = y - x, b = 1.0 - y;
      smallest = std::min(std::abs(a), std::abs(b));
      return y / (kPi * kPi * a * a * b * b);
    }
  }
  return 0.0;
}

}  // namespace

KernelValue kernel_closed_form(const Domain& d, Point z, Point w) {
  if (!has_closed_form(d)) throw UnsupportedDomain("no closed-form kernel for " + d.spec());
  require_point(d, z);
  require_point(d, w);
  KernelValue out;
  double smallest = 1.0;
  out.value = closed_form_value(d, z, w, smallest);
  if (smallest < kSingularGuard)
    out.warning = "near-singular kernel denominator (" + std::to_string(smallest) + ")";
  return out;
}

ReproduceResult reproduce_check(const Domain& d, const MultiIndex& alpha, Point z, int radius) {
  require_dim(d, alpha);
  require_point(d, z);
  if (alpha.max_abs() > radius)
    throw DomainError("multi-index " + alpha.str() + " lies outside the series window " + std::to_string(radius));
  if (!member(d, alpha, kTwo)) throw DomainError("z^" + alpha.str() + " is not in A^2 of " + d.spec());

  std::vector<ComplexRational> zx;
  for (auto zi : z) zx.push_back(complex_from_double(zi));
  auto zpow = [&](const MultiIndex& b) {
    ComplexRational v(Rational(1));
    for (std::size_t i = 0; i < b.size(); ++i) v = v * exact_pow(zx[i], b[i]);
    return v;
  };

  KernelSeries series = kernel_series(d, radius);
  auto e_alpha = MixedMonomialSum::monomial(alpha);
  ReproduceResult res;
  // <e_alpha, K(., z)> = sum_beta z^beta / ||e_beta||^2 * <e_alpha, e_beta>
  for (const KernelTerm& t : series.terms) {
    ExactComplex ip = inner(d, e_alpha, MixedMonomialSum::monomial(t.alpha));
    if (ip.coeff.is_zero()) continue;
    if (ip.pi_power != series.inv_pi_power) throw Error("internal: pi powers do not cancel in the reproducing sum");
    res.value += ip.coeff * t.inv_coeff * zpow(t.alpha);
  }
  res.expected = zpow(alpha);
  ComplexRational diff = res.value - res.expected;
  res.exact_zero = diff.is_zero();
  res.residual = std::hypot(diff.re.get_d(), diff.im.get_d());
  return res;
}

DensityResult density_residual(const Domain& d, const MultiIndex& alpha,
                               const std::vector<std::vector<std::complex<double>>>& points) {
  require_dim(d, alpha);
  if (!member(d, alpha, kTwo)) throw DomainError("z^" + alpha.str() + " is not in A^2 of " + d.spec());
  if (points.empty()) throw DomainError("density residual needs at least one point");
  for (const auto& p : points) require_point(d, p);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (points[i] == points[j]) throw DomainError("points must be pairwise distinct");

  const Eigen::Index k = static_cast<Eigen::Index>(points.size());
  std::optional<KernelSeries> series;
  if (!has_closed_form(d)) series = kernel_series(d, kSeriesFallbackRadius);
  auto K = [&](const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) {
    return series ? series->evaluate(a, b) : kernel_closed_form(d, a, b).value;
  };

  Eigen::MatrixXcd G(k, k);
  Eigen::VectorXcd rhs(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    rhs(i) = monomial_value(points[i], alpha);
    for (Eigen::Index j = 0; j <= i; ++j) {
      G(i, j) = K(points[i], points[j]);
      G(j, i) = std::conj(G(i, j));
    }
    G(i, i) = G(i, i).real();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(G, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
  DensityResult res;
  res.condition = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(res.condition <= kMaxGramCondition))
    throw IllConditioned("Gram matrix condition estimate " + std::to_string(res.condition) +
                         " exceeds 1e12; use fewer or better-spread points");

  Eigen::VectorXcd a = G.ldlt().solve(rhs);
  res.norm_sq = moment(d, alpha, kTwo).to_double();
  res.raw = res.norm_sq - rhs.dot(a).real();
  res.clamped = res.raw < 0;
  res.residual = std::max(0.0, res.raw);
  return res;
}

KernelNormEstimate kernel_pnorm_estimate(const Domain& d, Point z, const Exponent& p, int radius,
                                         const QuadConfig& cfg) {
  require_point(d, z);
  std::vector<std::complex<double>> w(z.begin(), z.end());
  const double pd = p.as_double();

  Integrand g;
  g.angle_free.resize(d.dim());
  for (int i = 0; i < d.dim(); ++i) g.angle_free[i] = (w[i] == 0.0);
  g.angular_hint = 16;
  if (has_closed_form(d)) {
    g.log_eval = [d, w, pd](Point zeta, std::span<const double>) {
      double smallest;
      return pd * std::log(std::abs(closed_form_value(d, zeta, w, smallest)));
    };
  } else {
    // terms with alpha_i != 0 on a vanishing coordinate of z drop out
    KernelSeries s = kernel_series(d, radius);
    std::erase_if(s.terms, [&](const KernelTerm& t) {
      for (int i = 0; i < d.dim(); ++i)
        if (w[i] == 0.0 && t.alpha[i] != 0) return true;
      return false;
    });
    g.log_eval = [s = std::move(s), w, pd](Point zeta, std::span<const double>) {
      return pd * std::log(std::abs(s.evaluate(zeta, w)));
    };
  }

  KernelNormEstimate out;
  out.probe = probe_integral(d, g, cfg);
  if (out.probe.verdict == ProbeVerdict::Inconclusive)
    throw Inconclusive("kernel norm probe: cut-off sequence neither stabilizes nor grows");
  out.diverging = out.probe.verdict == ProbeVerdict::Diverging;
  out.tenfold_growth = std::all_of(out.probe.growth.begin(), out.probe.growth.end(), [](double r) { return r >= 10.0; });
  out.value = std::pow(out.probe.value, 1.0 / pd);
  return out;
}

}  // namespace bergman
