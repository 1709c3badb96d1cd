#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "bergman/errors.hpp"
#include "bergman/index_sets.hpp"
#include "bergman/kernel.hpp"
#include "bergman/verify.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace bergman;
using cd = std::complex<double>;
using Pt = std::vector<cd>;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

std::vector<Domain> closed_form_domains() {
  return {Domain::polydisc(1), Domain::polydisc(2), Domain::polydisc(3), Domain::ball(1),
          Domain::ball(2),     Domain::ball(3),     Domain::hartogs(1, 1)};
}

Pt roots(int k, double scale) {
  Pt v;
  for (int j = 0; j < k; ++j) v.push_back(std::polar(scale, 2 * kPi * j / k));
  return v;
}

std::vector<Pt> as_points(const Pt& v) {
  std::vector<Pt> out;
  for (cd z : v) out.push_back({z});
  return out;
}

}  // namespace

TEST_CASE("truncated kernel examples") {
  Pt o1 = {0.0};
  for (int N : {0, 3, 40}) CHECK(std::abs(kernel_truncated(Domain::polydisc(1), o1, o1, N) - 1 / kPi) < 1e-15);
  CHECK(std::abs(kernel_truncated(Domain::ball(1), o1, o1, 10) - 1 / kPi) < 1e-15);

  Pt z = {0.0, 0.5};
  cd series = kernel_truncated(Domain::hartogs(1, 1), z, z, 20);
  cd closed = kernel_closed_form(Domain::hartogs(1, 1), z, z).value;
  CHECK(rel(series, closed) < 1e-10);
}

TEST_CASE("closed form examples") {
  Pt o1 = {0.0}, o2 = {0.0, 0.0};
  CHECK(std::abs(kernel_closed_form(Domain::polydisc(1), o1, o1).value - 1 / kPi) < 1e-15);
  cd b = kernel_closed_form(Domain::ball(2), o2, o2).value;
  CHECK(std::abs(b - 2 / (kPi * kPi)) < 1e-15);
  // series oracle at the origin: 1 / ||1||^2
  CHECK(std::abs(b - 1 / volume(Domain::ball(2)).to_double()) < 1e-15);

  for (double t : {0.1, 0.5, 0.9}) {
    Pt z = {0.0, t};
    double expect = 1 / (kPi * kPi * t * t * (1 - t * t) * (1 - t * t));
    CHECK(rel(kernel_closed_form(Domain::hartogs(1, 1), z, z).value, expect) < 1e-14);
  }
}

TEST_CASE("closed form errors and warnings") {
  Pt z = {0.1, 0.5};
  CHECK_THROWS_AS(kernel_closed_form(Domain::hartogs(1, 2), z, z), UnsupportedDomain);
  Pt out = {0.9, 0.5};
  CHECK_THROWS_AS(kernel_closed_form(Domain::hartogs(1, 1), out, z), PointOutsideDomain);
  CHECK_THROWS_AS(kernel_truncated(Domain::ball(2), Pt{0.8, 0.7}, z, 4), PointOutsideDomain);
  CHECK_THROWS_AS(kernel_truncated(Domain::ball(2), Pt{0.1}, z, 4), DimensionError);
  Pt edge = {1.0 - 1e-13};
  KernelValue v = kernel_closed_form(Domain::polydisc(1), edge, edge);
  CHECK(v.warning);
  CHECK_FALSE(kernel_closed_form(Domain::polydisc(1), Pt{0.5}, Pt{0.5}).warning);
}

TEST_CASE("series terms are the allowable set with positive coefficients") {
  for (const Domain& d : {Domain::hartogs(1, 1), Domain::hartogs(3, 2), Domain::ball(2), Domain::polydisc(3)}) {
    const int N = d.dim() == 3 ? 3 : 5;
    KernelSeries s = kernel_series(d, N);
    auto w = index_set_window(d, Exponent(2, 1), N).members;
    REQUIRE(s.terms.size() == w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(s.terms[i].alpha == w[i]);
      CHECK(s.terms[i].inv_coeff > 0);
      CHECK(s.terms[i].inv_coeff * moment(d, w[i], Exponent(2, 1)).value().coeff == 1);
    }
  }
}

TEST_CASE("series agrees with closed forms on random point pairs") {
  std::mt19937_64 rng(99);
  for (const Domain& d : closed_form_domains()) {
    KernelSeries s = kernel_series(d, 40);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      Pt z = random_point(d, rng), w = random_point(d, rng);
      worst = std::max(worst, rel(s.evaluate(z, w), kernel_closed_form(d, z, w).value));
    }
    CHECK_MESSAGE(worst < 1e-8, d.spec());
  }
}

TEST_CASE("hermitian symmetry") {
  std::mt19937_64 rng(3);
  for (const Domain& d : closed_form_domains()) {
    for (int t = 0; t < 20; ++t) {
      Pt z = random_point(d, rng), w = random_point(d, rng);
      cd a = kernel_closed_form(d, z, w).value, b = kernel_closed_form(d, w, z).value;
      CHECK(rel(a, std::conj(b)) < 1e-14);
      cd sa = kernel_truncated(d, z, w, 12), sb = kernel_truncated(d, w, z, 12);
      CHECK(rel(sa, std::conj(sb)) < 1e-14);
    }
  }
  Domain h = Domain::hartogs(2, 3);
  for (int t = 0; t < 20; ++t) {
    Pt z = random_point(h, rng), w = random_point(h, rng);
    CHECK(rel(kernel_truncated(h, z, w, 12), std::conj(kernel_truncated(h, w, z, 12))) < 1e-14);
  }
}

TEST_CASE("diagonal values are positive and grow with the window") {
  std::mt19937_64 rng(8);
  for (const Domain& d : {Domain::ball(2), Domain::hartogs(1, 1), Domain::hartogs(2, 1), Domain::polydisc(2)}) {
    Pt z = random_point(d, rng);
    double prev = 0.0;
    for (int N = 0; N <= 20; ++N) {
      cd k = kernel_truncated(d, z, z, N);
      CHECK(std::abs(k.imag()) <= 1e-15 * std::abs(k.real()));
      CHECK(k.real() >= prev);
      prev = k.real();
    }
    CHECK(prev > 0.0);
  }
}

TEST_CASE("reproducing property examples are exact") {
  CHECK(reproduce_check(Domain::hartogs(1, 1), {1, -1}, Pt{0.3, 0.6}, 5).exact_zero);
  CHECK(reproduce_check(Domain::polydisc(2), {2, 3}, Pt{0.1, cd(0.0, 0.2)}, 5).exact_zero);
  for (const Domain& d : closed_form_domains()) {
    Pt z(d.dim(), cd(0.1, -0.05));
    z[0] *= 0.5;
    for (int N : {0, 1, 3}) {
      ReproduceResult r = reproduce_check(d, MultiIndex(d.dim(), 0), z, N);
      CHECK(r.exact_zero);
      CHECK(r.residual == 0.0);
    }
  }
}

TEST_CASE("reproducing property holds exactly over whole windows") {
  std::mt19937_64 rng(21);
  for (const Domain& d : {Domain::hartogs(1, 1), Domain::hartogs(2, 3), Domain::ball(2), Domain::polydisc(2),
                          Domain::ball(3)}) {
    const int N = d.dim() == 3 ? 2 : 4;
    Pt z = random_point(d, rng);
    for (const MultiIndex& a : index_set_window(d, Exponent(2, 1), N).members)
      CHECK_MESSAGE(reproduce_check(d, a, z, N).exact_zero, d.spec() << " " << a.str());
  }
}

TEST_CASE("reproducing check rejects indices it cannot evaluate") {
  Pt z = {0.3, 0.6};
  CHECK_THROWS_AS(reproduce_check(Domain::hartogs(1, 1), {0, -6}, z, 5), DomainError);  // outside the window
  CHECK_THROWS_AS(reproduce_check(Domain::hartogs(1, 1), {0, -2}, z, 5), DomainError);  // not in A^2
  CHECK_THROWS_AS(reproduce_check(Domain::hartogs(1, 1), {-1, 0}, z, 5), DomainError);
}

TEST_CASE("density residual examples") {
  Domain d = Domain::polydisc(1);
  DensityResult r0 = density_residual(d, {0}, {{0.0}});
  CHECK(std::abs(r0.residual) < 1e-14);
  CHECK(std::abs(r0.norm_sq - kPi) < 1e-15);
  DensityResult r1 = density_residual(d, {1}, {{0.0}});
  CHECK(std::abs(r1.residual - kPi / 2) < 1e-14);
  CHECK_THROWS_AS(density_residual(d, {0}, {{0.5}, {0.5}}), DomainError);
  CHECK_THROWS_AS(density_residual(d, {0}, {{0.5}, {0.5 + 1e-9}}), IllConditioned);
  CHECK_THROWS_AS(density_residual(d, {0}, {}), DomainError);
  CHECK_THROWS_AS(density_residual(Domain::hartogs(1, 1), {0, -2}, {{0.1, 0.5}}), DomainError);
}

TEST_CASE("density residual decreases along nested roots of unity") {
  Domain d = Domain::polydisc(1);
  for (int a = 0; a <= 3; ++a) {
    double prev = std::numeric_limits<double>::infinity();
    double norm = 0.0;
    for (int k : {1, 2, 4, 8, 16}) {
      DensityResult r = density_residual(d, {a}, as_points(roots(k, 0.5)));
      CHECK(r.residual >= 0.0);
      CHECK(r.residual <= prev);
      prev = r.residual;
      norm = r.norm_sq;
    }
    CHECK(prev < 1e-3 * norm);
  }
}

TEST_CASE("density residual is non-increasing under point inclusion") {
  std::mt19937_64 rng(12);
  for (const Domain& d : {Domain::ball(2), Domain::hartogs(1, 1), Domain::hartogs(1, 2)}) {
    std::vector<Pt> pts;
    double prev = std::numeric_limits<double>::infinity();
    MultiIndex a = d.family() == Family::Hartogs ? MultiIndex{1, -1} : MultiIndex{1, 0};
    for (int k = 0; k < 6; ++k) {
      pts.push_back(random_point(d, rng));
      DensityResult r = density_residual(d, a, pts);
      CHECK(r.residual >= 0.0);
      CHECK(r.residual <= prev + 1e-12 * r.norm_sq);
      prev = r.residual;
    }
  }
}

TEST_CASE("kernel p-norm examples") {
  Domain h = Domain::hartogs(1, 1);
  Pt z = {0.0, 0.5};
  KernelNormEstimate f3 = kernel_pnorm_estimate(h, z, Exponent(3, 1), 40);
  CHECK_FALSE(f3.diverging);
  KernelNormEstimate f5 = kernel_pnorm_estimate(h, z, Exponent(5, 1), 40);
  CHECK(f5.diverging);
  for (long p : {1L, 2L, 5L}) {
    KernelNormEstimate e = kernel_pnorm_estimate(Domain::polydisc(1), Pt{0.0}, Exponent(p, 1), 40);
    CHECK_FALSE(e.diverging);
    CHECK(std::abs(e.value - std::pow(kPi, 1.0 / p - 1)) < 1e-10);
  }
}

TEST_CASE("kernel p-norm against an independent radial oracle") {
  // K(., (0, 1/2)) on hartogs:1/1 depends on zeta2 only; the zeta1 slice has area pi r2^2
  const double p = 3.0;
  // |K|^p r2^3 with |y| = r2 / 2 folded in, so the integrand stays bounded at r2 = 0
  auto scaled = [&](double r2, double th) {
    cd y = std::polar(r2 / 2, th);
    return std::pow(2.0 / (kPi * kPi * std::norm(1.0 - y)), p) * std::pow(r2, 3.0 - p);
  };
  double ref = oracle::ts(
      [&](double r2) { return oracle::gk([&](double th) { return scaled(r2, th); }, 0.0, 2 * kPi) * kPi; }, 0.0,
      1.0);
  KernelNormEstimate e = kernel_pnorm_estimate(Domain::hartogs(1, 1), Pt{0.0, 0.5}, Exponent(3, 1), 40);
  CHECK(std::abs(e.value - std::cbrt(ref)) / std::cbrt(ref) < 1e-8);
}

TEST_CASE("kernel p-norm verdicts bracket the integrability index") {
  Domain h = Domain::hartogs(1, 1);
  IndexReport r = index_report(h, 6, Rational(kDefaultPCap));
  Pt z = {0.0, 0.5};
  for (Exponent p : {Exponent(3, 1), Exponent(7, 2), Exponent(9, 2), Exponent(5, 1)}) {
    KernelNormEstimate e = kernel_pnorm_estimate(h, z, p, 40);
    if (!e.diverging) CHECK(p.value() < r.beta.value.value);
    if (e.diverging) CHECK(p.value() > r.regularity.value.value);
    CHECK(e.diverging == (p.value() > 4));
  }
}

TEST_CASE("kernel p-norm without a closed form uses the series") {
  KernelNormEstimate e = kernel_pnorm_estimate(Domain::hartogs(1, 2), Pt{0.0, 0.5}, Exponent(2, 1), 40);
  CHECK_FALSE(e.diverging);
  // ||K(., z)||_2^2 = K(z, z)
  double kzz = kernel_truncated(Domain::hartogs(1, 2), Pt{0.0, 0.5}, Pt{0.0, 0.5}, 40).real();
  CHECK(std::abs(e.value * e.value - kzz) / kzz < 1e-8);
}
