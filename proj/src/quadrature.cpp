#include "bergman/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bergman/errors.hpp"
#include "bergman/parallel.hpp"

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// tanh-sinh truncation: the outermost node sits near exp(-pi sinh 5) ~ 1e-101.
constexpr double kTmax = 5.0;

// Cube-axis node; positions and weight are kept as logarithms so products
// over several axes never underflow.
struct Node {
  double lx;   // log x
  double lxc;  // log(1 - x)
  double lw;   // log weight
};
using AxisRule = std::vector<Node>;

// log(1 / (1 + exp(-e)))
double log_sigmoid(double e) { return e > 0 ? -std::log1p(std::exp(-e)) : e - std::log1p(std::exp(e)); }

// tanh-sinh nodes on [0, 1]: emit(log s+, log s-, s+, log w), s+ + s- = 1.
template <typename Emit>
void tanh_sinh(int nodes, Emit&& emit) {
  const double h = 2.0 * kTmax / (nodes - 1);
  for (int k = 0; k < nodes; ++k) {
    double t = -kTmax + k * h;
    double e = kPi * std::sinh(t);
    double lsp = log_sigmoid(e);
    double lsm = log_sigmoid(-e);
    double lw = std::log(h * kPi * std::cosh(t)) + lsp + lsm;
    emit(lsp, lsm, std::exp(lsp), lw);
  }
}

enum class Piece { Full, LowerHalf, UpperHalf, LogLower, LogUpper };

void append_piece(AxisRule& rule, Piece piece, int nodes, double cutoff) {
  tanh_sinh(nodes, [&](double lsp, double lsm, double sp, double lw) {
    switch (piece) {
      case Piece::Full: rule.push_back({lsp, lsm, lw}); break;
      case Piece::LowerHalf: {
        double x = 0.5 * sp;
        rule.push_back({lsp - std::numbers::ln2, std::log1p(-x), lw - std::numbers::ln2});
        break;
      }
      case Piece::UpperHalf: {
        double xc = 0.5 * std::exp(lsm);
        rule.push_back({std::log1p(-xc), lsm - std::numbers::ln2, lw - std::numbers::ln2});
        break;
      }
      case Piece::LogLower: {
        double u = cutoff + (0.5 - cutoff) * sp;
        rule.push_back({std::log(u), std::log1p(-u), lw + std::log(0.5 - cutoff)});
        break;
      }
      case Piece::LogUpper: {
        double u = cutoff + (0.5 - cutoff) * sp;
        rule.push_back({std::log1p(-u), std::log(u), lw + std::log(0.5 - cutoff)});
        break;
      }
    }
  });
}

// Which cube ends map onto a vanishing coordinate modulus.
std::pair<bool, bool> singular_ends(const Domain& d, int axis) {
  if (d.family() == Family::Ball) return {true, axis < d.dim() - 1};
  return {true, false};
}

AxisRule axis_rule(const Domain& d, int axis, int nodes, double cutoff) {
  AxisRule rule;
  auto [lower, upper] = singular_ends(d, axis);
  if (cutoff <= 0.0 || (!lower && !upper)) {
    append_piece(rule, Piece::Full, nodes, cutoff);
    return rule;
  }
  append_piece(rule, lower ? Piece::LogLower : Piece::LowerHalf, nodes, cutoff);
  append_piece(rule, upper ? Piece::LogUpper : Piece::UpperHalf, nodes, cutoff);
  return rule;
}

// Fills log r_i from cube nodes and returns the log Jacobian including the
// polar factor prod r_i.
double shadow_map(const Domain& d, std::span<const Node* const> nodes, std::span<double> lr) {
  const int n = d.dim();
  switch (d.family()) {
    case Family::Polydisc: {
      double lj = 0.0;
      for (int i = 0; i < n; ++i) {
        lr[i] = nodes[i]->lx;
        lj += lr[i];
      }
      return lj;
    }
    case Family::Hartogs: {
      double lu = nodes[0]->lx, lv = nodes[1]->lx;
      double ratio = static_cast<double>(d.n()) / d.m();
      lr[0] = lu + ratio * lv;
      lr[1] = lv;
      return ratio * lv + lr[0] + lr[1];
    }
    case Family::Ball: {
      double lj = -n * std::numbers::ln2;
      double rest = 0.0;  // log prod_{j<k} (1 - u_j)
      for (int k = 0; k < n; ++k) {
        lr[k] = 0.5 * (rest + nodes[k]->lx);
        lj += (n - 1 - k) * nodes[k]->lxc;
        rest += nodes[k]->lxc;
      }
      return lj;
    }
  }
  return 0.0;
}

// Writes log g_k(z) for each requested output.
using MultiEval = std::function<void(Point, std::span<const double>, std::span<double>)>;

int angular_count(std::optional<int> bandwidth, int hint, int configured) {
  if (configured > 0) return configured;
  if (bandwidth) return 2 * *bandwidth + 4;
  return std::max(24, 4 * hint + 8);
}

// Streaming log-sum-exp accumulator, so cut-off integrals of divergent
// integrands may exceed the double range.
struct LogAcc {
  double m = kNegInf;
  double s = 0.0;
  void add(double l) {
    if (l == kNegInf) return;
    if (l <= m) {
      s += std::exp(l - m);
    } else {
      s = s * std::exp(m - l) + 1.0;
      m = l;
    }
  }
  double log() const { return m == kNegInf ? kNegInf : m + std::log(s); }
};

// Returns log of each integral.
std::vector<double> integrate_core_log(const Domain& d, const MultiEval& g, std::size_t outputs,
                                       std::optional<int> bandwidth, int hint, const QuadConfig& cfg, int radial_nodes,
                                       const std::vector<bool>& free_axes = {}) {
  const int n = d.dim();
  std::vector<AxisRule> rules;
  for (int i = 0; i < n; ++i) rules.push_back(axis_rule(d, i, radial_nodes, cfg.corner_cutoff));

  // Angle-independent axes need a single angular node.
  const int A_default = (bandwidth && *bandwidth == 0) ? 1 : angular_count(bandwidth, hint, cfg.angular_nodes);
  std::vector<int> A(n, A_default);
  std::vector<std::vector<std::complex<double>>> phase(n);
  double log_angular_weight = 0.0;
  std::size_t angular_tuples = 1;
  for (int i = 0; i < n; ++i) {
    if (i < static_cast<int>(free_axes.size()) && free_axes[i]) A[i] = 1;
    for (int a = 0; a < A[i]; ++a) phase[i].push_back(std::polar(1.0, 2.0 * kPi * a / A[i]));
    log_angular_weight += std::log(2.0 * kPi / A[i]);
    angular_tuples *= A[i];
  }

  // one chunk per node of the first axis; reduction order is fixed
  const std::size_t chunks = rules[0].size();
  std::vector<LogAcc> partial(chunks * outputs);
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<const Node*> sel(n);
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> lr(n), radius(n);
    std::vector<std::complex<double>> z(n);
    std::vector<double> lval(outputs);
    std::vector<std::size_t> ang(n);
    std::span<LogAcc> acc(partial.data() + c * outputs, outputs);
    sel[0] = &rules[0][c];
    while (true) {
      for (int i = 1; i < n; ++i) sel[i] = &rules[i][idx[i]];
      double lw = log_angular_weight;
      for (int i = 0; i < n; ++i) lw += sel[i]->lw;
      lw += shadow_map(d, sel, lr);
      if (lw > kNegInf) {
        std::fill(ang.begin(), ang.end(), 0);
        for (int i = 0; i < n; ++i) radius[i] = std::exp(lr[i]);
        for (std::size_t t = 0; t < angular_tuples; ++t) {
          for (int i = 0; i < n; ++i) z[i] = radius[i] * phase[i][ang[i]];
          g(z, lr, lval);
          for (std::size_t o = 0; o < outputs; ++o) {
            if (lval[o] == kNegInf) continue;
            double term = lw + lval[o];
            if (std::isnan(term) || term == std::numeric_limits<double>::infinity())
              throw DomainError("integrand is not finite at a quadrature node (log r1 = " + std::to_string(lr[0]) +
                                ")");
            acc[o].add(term);
          }
          for (int i = n - 1; i >= 0; --i) {
            if (++ang[i] < static_cast<std::size_t>(A[i])) break;
            ang[i] = 0;
          }
        }
      }
      int i = n - 1;
      for (; i >= 1; --i) {
        if (++idx[i] < rules[i].size()) break;
        idx[i] = 0;
      }
      if (i < 1) break;
    }
  });

  std::vector<double> out(outputs);
  std::vector<double> column(chunks);
  for (std::size_t o = 0; o < outputs; ++o) {
    double top = kNegInf;
    for (std::size_t c = 0; c < chunks; ++c) top = std::max(top, partial[c * outputs + o].log());
    if (top == kNegInf) {
      out[o] = kNegInf;
      continue;
    }
    for (std::size_t c = 0; c < chunks; ++c) column[c] = std::exp(partial[c * outputs + o].log() - top);
    out[o] = top + std::log(tree_sum(column));
  }
  return out;
}

std::vector<double> integrate_core(const Domain& d, const MultiEval& g, std::size_t outputs,
                                   std::optional<int> bandwidth, int hint, const QuadConfig& cfg, int radial_nodes,
                                   const std::vector<bool>& free_axes = {}) {
  auto logs = integrate_core_log(d, g, outputs, bandwidth, hint, cfg, radial_nodes, free_axes);
  for (double& v : logs) v = std::exp(v);
  return logs;
}

// NaN passes through so the node loop reports it
double safe_log(double v) { return std::isnan(v) ? v : (v > 0.0 ? std::log(v) : kNegInf); }

}  // namespace

void QuadConfig::validate() const {
  if (radial_nodes < 4) throw DomainError("radial node count must be >= 4");
  if (angular_nodes != 0 && angular_nodes < 4) throw DomainError("angular node count must be >= 4");
  if (!(corner_cutoff >= 0.0 && corner_cutoff < 0.5)) throw DomainError("corner cutoff must lie in [0, 1/2)");
  if (refinement_levels < 2) throw DomainError("refinement levels must be >= 2");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
}

QuadConfig QuadConfig::scaled_nodes(int factor) const {
  QuadConfig c = *this;
  c.radial_nodes = (radial_nodes - 1) * factor + 1;
  if (angular_nodes > 0) c.angular_nodes = angular_nodes * factor;
  return c;
}

Integrand Integrand::modulus_monomial(std::vector<double> c) {
  Integrand g;
  g.bandwidth = 0;
  g.log_eval = [c = std::move(c)](Point, std::span<const double> lr) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0.0) s += c[i] * lr[i];
    return s;
  };
  return g;
}

Integrand Integrand::modulus_power(const MixedMonomialSum& f, double p) {
  Function fn = Function::from(f);
  Integrand g;
  int bw = f.angular_bandwidth();
  if (fn.single_term)
    g.bandwidth = 0;
  else if (p == std::floor(p) && static_cast<long>(p) % 2 == 0)
    g.bandwidth = static_cast<int>(p) * bw;
  g.angular_hint = bw;
  g.log_eval = [fn, p](Point z, std::span<const double>) { return p * safe_log(std::abs(fn.eval(z))); };
  return g;
}

Integrand Integrand::from_value(std::function<double(Point)> value, std::optional<int> bandwidth, int angular_hint) {
  Integrand g;
  g.bandwidth = bandwidth;
  g.angular_hint = angular_hint;
  g.log_eval = [value = std::move(value)](Point z, std::span<const double>) { return safe_log(value(z)); };
  return g;
}

namespace {

std::complex<double> ipow(std::complex<double> z, int k) {
  if (k == 0) return 1.0;
  if (k < 0) return 1.0 / ipow(z, -k);
  std::complex<double> r = 1.0;
  while (k) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

// Coefficients converted once; evaluation order matches MixedMonomialSum::evaluate.
struct CompiledSum {
  std::size_t dim;
  std::vector<std::complex<double>> coeff;
  std::vector<int> alpha, gamma;  // term-major

  std::complex<double> operator()(Point z) const {
    if (z.size() != dim) throw DimensionError("point dimension mismatch");
    std::complex<double> s = 0.0;
    for (std::size_t t = 0; t < coeff.size(); ++t) {
      std::complex<double> v = coeff[t];
      for (std::size_t i = 0; i < dim; ++i)
        v *= ipow(z[i], alpha[t * dim + i]) * ipow(std::conj(z[i]), gamma[t * dim + i]);
      s += v;
    }
    return s;
  }
};

}  // namespace

Function Function::from(const MixedMonomialSum& f) {
  Function fn;
  fn.bandwidth = f.angular_bandwidth();
  fn.single_term = f.size() <= 1;
  CompiledSum c{f.dim(), {}, {}, {}};
  for (const auto& [key, coeff] : f.terms()) {
    c.coeff.push_back(coeff.to_complex());
    for (std::size_t i = 0; i < f.dim(); ++i) {
      c.alpha.push_back(key.first[i]);
      c.gamma.push_back(key.second[i]);
    }
  }
  fn.eval = std::move(c);
  return fn;
}

namespace {
MultiEval single(const Integrand& g) {
  return [&g](Point z, std::span<const double> lr, std::span<double> out) { out[0] = g.log_eval(z, lr); };
}
}  // namespace

QuadResult integrate(const Domain& d, const Integrand& g, const QuadConfig& cfg) {
  cfg.validate();
  MultiEval eval = single(g);
  auto run = [&](const QuadConfig& c) {
    return integrate_core(d, eval, 1, g.bandwidth, g.angular_hint, c, c.radial_nodes, g.angle_free)[0];
  };
  QuadConfig c = cfg;
  double coarse = run(c);
  QuadResult res{};
  // two-level estimate; one doubling of the node counts when it exceeds the tolerance
  for (int attempt = 0; attempt < 2; ++attempt) {
    QuadConfig fine_cfg = c.scaled_nodes(2);
    double fine = run(fine_cfg);
    res = {fine, std::abs(fine - coarse)};
    if (res.error_estimate <= cfg.tolerance * std::abs(fine)) break;
    c = fine_cfg;
    coarse = fine;
  }
  return res;
}

std::vector<double> lp_norms(const Domain& d, const Function& f, std::span<const double> ps, const QuadConfig& cfg) {
  cfg.validate();
  for (double p : ps)
    if (!(p > 0.0)) throw DomainError("L^p norm requires p > 0");
  std::vector<double> exps(ps.begin(), ps.end());
  MultiEval eval = [&](Point z, std::span<const double>, std::span<double> out) {
    double la = safe_log(std::abs(f.eval(z)));
    for (std::size_t k = 0; k < exps.size(); ++k) out[k] = la == kNegInf ? kNegInf : exps[k] * la;
  };
  std::optional<int> bw;
  if (f.single_term) bw = 0;
  auto ints = integrate_core(d, eval, exps.size(), bw, f.bandwidth.value_or(8), cfg, cfg.radial_nodes);
  std::vector<double> out(exps.size());
  for (std::size_t k = 0; k < exps.size(); ++k) out[k] = std::pow(ints[k], 1.0 / exps[k]);
  return out;
}

double lp_norm(const Domain& d, const Function& f, double p, const QuadConfig& cfg) {
  double ps[] = {p};
  return lp_norms(d, f, ps, cfg)[0];
}

ProbeResult probe_integral(const Domain& d, const Integrand& g, const QuadConfig& cfg) {
  cfg.validate();
  ProbeResult res;
  MultiEval eval = single(g);
  const int levels = cfg.refinement_levels + 1;
  for (int k = 0; k < levels; ++k) {
    QuadConfig c = cfg;
    c.corner_cutoff = std::pow(10.0, -2.0 * (k + 1));
    res.cutoffs.push_back(c.corner_cutoff);
    double l = integrate_core_log(d, eval, 1, g.bandwidth, g.angular_hint, c, c.radial_nodes, g.angle_free)[0];
    res.log_integrals.push_back(l);
    res.integrals.push_back(std::exp(l));
  }
  const auto& L = res.log_integrals;
  for (int k = 0; k + 1 < levels; ++k) res.growth.push_back(std::exp(L[k + 1] - L[k]));

  // Increments I_{k+1} - I_k, as sign and log magnitude.
  struct Inc {
    int sign;
    double log_mag;
    double log_ref;  // log of the larger of the two integrals
  };
  std::vector<Inc> inc;
  for (int k = 0; k + 1 < levels; ++k) {
    if (L[k + 1] == L[k] || L[k + 1] == kNegInf) {
      inc.push_back({0, kNegInf, L[k]});
    } else if (L[k + 1] > L[k]) {
      inc.push_back({1, L[k + 1] + std::log(-std::expm1(L[k] - L[k + 1])), L[k + 1]});
    } else {
      inc.push_back({-1, L[k] + std::log(-std::expm1(L[k + 1] - L[k])), L[k]});
    }
  }
  auto negligible = [](const Inc& x) { return x.sign == 0 || x.log_mag - x.log_ref <= std::log(1e-13); };
  bool any_negligible = false, all_positive = true;
  for (const Inc& x : inc) {
    any_negligible = any_negligible || negligible(x);
    all_positive = all_positive && x.sign > 0;
  }
  if (!any_negligible)
    for (std::size_t k = 0; k + 1 < inc.size(); ++k)
      res.increment_ratios.push_back(inc[k + 1].sign * inc[k].sign * std::exp(inc[k + 1].log_mag - inc[k].log_mag));

  constexpr double kDecay = 0.9;
  auto all_ratios = [&](auto pred) {
    return std::all_of(res.increment_ratios.begin(), res.increment_ratios.end(), pred);
  };
  if (!any_negligible && all_positive && all_ratios([](double r) { return r >= kDecay; })) {
    res.verdict = ProbeVerdict::Diverging;
  } else if (negligible(inc.back())) {
    res.verdict = ProbeVerdict::Stable;
  } else if (!any_negligible && all_positive && all_ratios([](double r) { return r >= 0.0 && r < kDecay; })) {
    res.verdict = ProbeVerdict::Stable;
  } else {
    res.verdict = ProbeVerdict::Inconclusive;
  }

  if (res.verdict == ProbeVerdict::Stable) {
    QuadConfig full = cfg;
    full.corner_cutoff = 0.0;
    res.value = integrate(d, g, full).value;
  } else {
    res.value = res.integrals.back();
  }
  return res;
}

DivergenceProbe divergence_probe(const Domain& d, const Function& f, double p, const QuadConfig& cfg) {
  if (!(p > 0.0)) throw DomainError("L^p norm requires p > 0");
  Integrand g;
  g.log_eval = [&f, p](Point z, std::span<const double>) { return p * safe_log(std::abs(f.eval(z))); };
  if (f.single_term) g.bandwidth = 0;
  g.angular_hint = f.bandwidth.value_or(8);
  ProbeResult raw = probe_integral(d, g, cfg);
  if (raw.verdict == ProbeVerdict::Inconclusive)
    throw Inconclusive("divergence probe: cut-off sequence neither stabilizes nor grows");
  DivergenceProbe out{raw.verdict == ProbeVerdict::Diverging, {}, std::pow(raw.value, 1.0 / p), raw};
  for (double v : raw.integrals) out.sequence.push_back(std::pow(v, 1.0 / p));
  return out;
}

}  // namespace bergman
