#include "bergman/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "bergman/duality_projection.hpp"
#include "bergman/errors.hpp"
#include "bergman/index_sets.hpp"
#include "bergman/kernel.hpp"
#include "bergman/parallel.hpp"
#include "bergman/verify.hpp"

namespace bergman::cli {

using json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// input parsing

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

int parse_int(const std::string& s, const std::string& what) {
  std::string t = trim(s);
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(t, &used);
  } catch (const std::exception&) {
    throw ParseError("malformed " + what + " '" + s + "'");
  }
  if (used != t.size()) throw ParseError("malformed " + what + " '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const std::string& what) {
  std::string t = trim(s);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ParseError("malformed " + what + " '" + s + "'");
  }
  if (used != t.size() || !std::isfinite(v)) throw ParseError("malformed " + what + " '" + s + "'");
  return v;
}

// "(1,-2)" or "1,-2"
MultiIndex parse_index(std::string s, const Domain& d) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  if (trim(s).empty()) throw ParseError("empty multi-index");
  std::vector<int> c;
  for (const auto& part : split(s, ',')) c.push_back(parse_int(part, "multi-index component"));
  MultiIndex a(std::move(c));
  require_dim(d, a);
  return a;
}

// comma separated coordinates, each "re" or "re:im"
std::vector<std::complex<double>> parse_point(const std::string& s, const Domain& d) {
  std::vector<std::complex<double>> z;
  for (const auto& part : split(s, ',')) {
    auto ri = split(part, ':');
    if (ri.size() == 1)
      z.emplace_back(parse_double(ri[0], "coordinate"), 0.0);
    else if (ri.size() == 2)
      z.emplace_back(parse_double(ri[0], "coordinate"), parse_double(ri[1], "coordinate"));
    else
      throw ParseError("malformed coordinate '" + part + "' (expected re or re:im)");
  }
  require_point(d, z);
  return z;
}

Rational json_rational(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number_float()) return rational_from_double(v.get<double>());
  throw ParseError("coefficient parts must be numbers or rational strings");
}

MixedMonomialSum parse_terms(const std::string& text, const Domain& d) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("term list is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("term list must be a JSON array");
  MixedMonomialSum f(d.dim());
  for (const auto& t : doc) {
    if (!t.is_object() || !t.contains("alpha")) throw ParseError("each term needs at least \"alpha\"");
    auto vec = [&](const char* key) {
      if (!t.contains(key)) return MultiIndex(d.dim());
      const auto& a = t.at(key);
      if (!a.is_array()) throw ParseError(std::string("\"") + key + "\" must be an integer array");
      std::vector<int> c;
      for (const auto& x : a) {
        if (!x.is_number_integer()) throw ParseError(std::string("\"") + key + "\" must be an integer array");
        c.push_back(x.get<int>());
      }
      MultiIndex m(std::move(c));
      require_dim(d, m);
      return m;
    };
    ComplexRational c(Rational(1));
    if (t.contains("c")) {
      const auto& cv = t.at("c");
      if (cv.is_array() && cv.size() == 2)
        c = ComplexRational(json_rational(cv[0]), json_rational(cv[1]));
      else if (cv.is_number() || cv.is_string())
        c = ComplexRational(json_rational(cv));
      else
        throw ParseError("\"c\" must be [re, im] or a real number");
    }
    f.add(c, vec("alpha"), vec("gamma"));
  }
  return f;
}

// ---------------------------------------------------------------------------
// output helpers

json index_json(const MultiIndex& a) { return json(a.components()); }

json exact_json(const ExactValue& v) {
  json j;
  j["coeff"] = to_string(v.coeff);
  j["pi_power"] = v.pi_power;
  if (v.gamma) {
    json g;
    g["num"] = json::array();
    g["den"] = json::array();
    for (const auto& r : v.gamma->num) g["num"].push_back(to_string(r));
    for (const auto& r : v.gamma->den) g["den"].push_back(to_string(r));
    j["gamma"] = g;
  }
  j["float"] = v.to_double();
  return j;
}

json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json point_json(const std::vector<std::complex<double>>& z) {
  json a = json::array();
  for (auto c : z) a.push_back({c.real(), c.imag()});
  return a;
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

enum class Format { Json, Csv, Table };

struct Context {
  Format format = Format::Json;
  std::uint64_t seed = 0;
  std::string command;
  std::vector<std::string> warnings;
  QuadConfig quad;
  bool timing = true;
};

json envelope(const Context& ctx) {
  json j;
  j["schema"] = kSchema;
  j["version"] = kVersion;
  j["command"] = ctx.command;
  j["seed"] = ctx.seed;
  return j;
}

void emit(std::ostream& out, const Context& ctx, json report, const Table& table, double seconds) {
  switch (ctx.format) {
    case Format::Json:
      if (!ctx.warnings.empty()) report["warnings"] = ctx.warnings;
      if (ctx.timing) report["timing"] = {{"seconds", seconds}};
      out << report.dump(2) << "\n";
      break;
    case Format::Csv: {
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << "\n";
      };
      line(table.header);
      for (const auto& r : table.rows) line(r);
      break;
    }
    case Format::Table: {
      std::vector<std::size_t> w(table.header.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = table.header[i].size();
      for (const auto& r : table.rows)
        for (std::size_t i = 0; i < r.size() && i < w.size(); ++i) w[i] = std::max(w[i], r[i].size());
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
          out << (i ? "  " : "") << std::left << std::setw(static_cast<int>(w[i])) << cells[i];
        out << "\n";
      };
      line(table.header);
      for (const auto& r : table.rows) line(r);
      break;
    }
  }
}

Domain domain_arg(const std::string& spec, Context& ctx) {
  ParsedDomain pd = parse_domain(spec);
  if (pd.warning) ctx.warnings.push_back(*pd.warning);
  return pd.domain;
}

// ---------------------------------------------------------------------------
// subcommands

struct Args {
  std::string domain;
  std::vector<std::string> domains;
  std::string p, plo = "1", phi = "5", pcap;
  int window = -1;
  int series_radius = kSeriesFallbackRadius;
  std::string z, w, alpha, gamma, points, roots = "1,2,4,8,16", terms;
  double scale = 0.5;
  int steps = 20;
  bool full = false;
};

int window_or_default(const Args& a, const Domain& d) {
  if (a.window < 0) return default_window(d);
  return a.window;
}

void cmd_info(const Args& a, Context& ctx, json& j, Table& t) {
  Domain d = domain_arg(a.domain, ctx);
  j["domain"] = d.spec();
  const char* fam = d.family() == Family::Polydisc ? "polydisc" : d.family() == Family::Ball ? "ball" : "hartogs";
  j["family"] = fam;
  j["dim"] = d.dim();
  if (d.family() == Family::Hartogs) {
    j["m"] = d.m();
    j["n"] = d.n();
  }
  json cons = json::array();
  for (const auto& c : d.finiteness_constraints()) cons.push_back({{"a", c.a}, {"b", c.b}});
  j["finiteness_constraints"] = cons;
  j["volume"] = exact_json(volume(d).value());
  j["default_window"] = default_window(d);
  j["p_independent"] = structurally_p_independent(d);
  j["closed_form_kernel"] = has_closed_form(d);
  t.header = {"key", "value"};
  t.rows = {{"domain", d.spec()},
            {"family", fam},
            {"dim", std::to_string(d.dim())},
            {"volume", volume(d).str()},
            {"default_window", std::to_string(default_window(d))},
            {"p_independent", structurally_p_independent(d) ? "true" : "false"},
            {"closed_form_kernel", has_closed_form(d) ? "true" : "false"}};
}

void cmd_index_set(const Args& a, Context& ctx, json& j, Table& t) {
  Domain d = domain_arg(a.domain, ctx);
  if (a.p.empty()) throw ParseError("index-set requires --p");
  Exponent p = parse_exponent(a.p);
  int radius = window_or_default(a, d);
  if (radius < 0) throw DomainError("window must be non-negative");
  IndexSetWindow s = index_set_window(d, p, radius);
  j["domain"] = d.spec();
  j["p"] = p.str();
  j["window"] = radius;
  j["count"] = s.members.size();
  json m = json::array();
  for (const auto& x : s.members) m.push_back(index_json(x));
  j["members"] = m;
  t.header = {"alpha"};
  for (const auto& x : s.members) t.rows.push_back({"\"" + x.str() + "\""});
}

void cmd_thresholds(const Args& a, Context& ctx, json& j, Table& t) {
  Domain d = domain_arg(a.domain, ctx);
  Exponent lo = parse_exponent(a.plo), hi = parse_exponent(a.phi);
  int radius = window_or_default(a, d);
  auto ts = thresholds(d, lo, hi, radius);
  j["domain"] = d.spec();
  j["window"] = radius;
  j["p_lo"] = lo.str();
  j["p_hi"] = hi.str();
  j["interval"] = "(" + lo.str() + ", " + hi.str() + "]";
  json arr = json::array();
  std::string list;
  for (const auto& th : ts) {
    arr.push_back({{"value", th.value.str()},
                   {"float", th.value.as_double()},
                   {"witness", index_json(th.witness)},
                   {"direction", to_string(th.direction)},
                   {"verified", th.verified}});
    list += (list.empty() ? "" : ", ") + th.value.str();
    t.rows.push_back({th.value.str(), "\"" + th.witness.str() + "\"", to_string(th.direction),
                      th.verified ? "true" : "false"});
  }
  j["thresholds"] = arr;
  j["list"] = list;
  t.header = {"threshold", "witness", "direction", "verified"};
}

json witnesses_json(const std::vector<Witness>& ws) {
  json a = json::array();
  for (const auto& w : ws) a.push_back({{"index", index_json(w.index)}, {"role", w.role}});
  return a;
}

void cmd_indices(const Args& a, Context& ctx, json& j, Table& t) {
  Domain d = domain_arg(a.domain, ctx);
  int radius = window_or_default(a, d);
  Rational cap = a.pcap.empty() ? Rational(kDefaultPCap) : parse_rational(a.pcap);
  IndexReport r = index_report(d, radius, cap);
  j["domain"] = d.spec();
  j["window"] = radius;
  j["p_cap"] = to_string(cap);
  auto value_json = [](const IndexValue& v) {
    json o = {{"kind", v.kind_str()}};
    o["value"] = v.kind == IndexValue::Kind::Unbounded ? json(nullptr) : json(to_string(v.value));
    return o;
  };
  j["duality_bound"] = value_json(r.duality.value);
  j["regularity_probe"] = value_json(r.regularity.value);
  j["beta_upper"] = value_json(r.beta.value);
  json w;
  w["duality_bound"] = witnesses_json(r.duality.witnesses);
  if (r.regularity.alpha) {
    w["regularity_probe"] = {{"alpha", index_json(*r.regularity.alpha)},
                             {"gamma", index_json(*r.regularity.gamma)},
                             {"delta", index_json(*r.regularity.delta)}};
  } else {
    w["regularity_probe"] = nullptr;
  }
  w["beta_upper"] = witnesses_json(r.beta.witnesses);
  j["witnesses"] = w;
  j["chain"] = "holds";
  j["notes"] = {"duality_bound is an upper bound computed from index sets",
                "regularity_probe is witnessed by an exact projection norm ratio"};
  t.header = {"index", "value", "kind"};
  t.rows = {{"duality_bound", r.duality.value.str(), r.duality.value.kind_str()},
            {"regularity_probe", r.regularity.value.str(), r.regularity.value.kind_str()},
            {"beta_upper", r.beta.value.str(), r.beta.value.kind_str()}};
}

void cmd_kernel(const Args& a, Context& ctx, json& j, Table& t) {
  Domain d = domain_arg(a.domain, ctx);
  if (a.z.empty()) throw ParseError("kernel requires --z");
  auto z = parse_point(a.z, d);
  auto w = a.w.empty() ? z : parse_point(a.w, d);
  if (a.series_radius < 0) throw DomainError("series radius must be non-negative");
  auto series = kernel_truncated(d, z, w, a.series_radius);
  j["domain"] = d.spec();
  j["z"] = point_json(z);
  j["w"] = point_json(w);
  j["N"] = a.series_radius;
  j["value"] = complex_json(series);
  t.header = {"quantity", "re", "im"};
  t.rows.push_back({"series", fmt_double(series.real()), fmt_double(series.imag())});
  if (has_closed_form(d)) {
    KernelValue cf = kernel_closed_form(d, z, w);
    if (cf.warning) ctx.warnings.push_back(*cf.warning);
    j["closed_form"] = complex_json(cf.value);
    j["abs_diff"] = std::abs(series - cf.value);
    t.rows.push_back({"closed_form", fmt_double(cf.value.real()), fmt_double(cf.value.imag())});
  } else {
    j["closed_form"] = nullptr;
  }
  if (!a.p.empty()) {
    Exponent p = parse_exponent(a.p);
    KernelNormEstimate est = kernel_pnorm_estimate(d, z, p, a.series_radius, ctx.quad);
    json seq = json::array();
    for (std::size_t k = 0; k < est.probe.cutoffs.size(); ++k)
      seq.push_back({{"cutoff", est.probe.cutoffs[k]}, {"log_integral", est.probe.log_integrals[k]}});
    j["pnorm"] = {{"p", p.str()},
                  {"diverging", est.diverging},
                  {"value", est.diverging ? json(nullptr) : json(est.value)},
                  {"tenfold_growth", est.tenfold_growth},
                  {"sequence", seq}};
    t.rows.push_back({"pnorm_p=" + p.str(), est.diverging ? "diverging" : fmt_double(est.value), ""});
  }
}

std::vector<std::complex<double>> root_point(const Domain& d, double scale, double angle) {
  std::complex<double> u = std::polar(1.0, angle);
  std::vector<std::complex<double>> z(d.dim());
  switch (d.family()) {
    case Family::Polydisc:
      for (auto& c : z) c = scale * u;
      break;
    case Family::Ball:
      for (auto& c : z) c = scale / std::sqrt(static_cast<double>(d.dim())) * u;
      break;
    case Family::Hartogs:
      z[1] = scale * u;
      z[0] = 0.5 * std::pow(scale, static_cast<double>(d.n()) / d.m()) * u;
      break;
  }
  return z;
}

void cmd_density(const Args& a, Context& ctx, json& j, Table& t) {
  Domain d = domain_arg(a.domain, ctx);
  MultiIndex alpha = a.alpha.empty() ? MultiIndex(d.dim()) : parse_index(a.alpha, d);
  j["domain"] = d.spec();
  j["alpha"] = index_json(alpha);
  j["norm"] = "A2 proxy";
  t.header = {"k", "residual"};
  json rows = json::array();
  auto add = [&](std::size_t k, const DensityResult& r) {
    rows.push_back({{"k", k}, {"residual", r.residual}, {"raw", r.raw}, {"condition", r.condition},
                    {"clamped", r.clamped}});
    t.rows.push_back({std::to_string(k), fmt_double(r.residual)});
    if (r.clamped) ctx.warnings.push_back("negative round-off residual clamped to 0 at k=" + std::to_string(k));
  };
  if (!a.points.empty()) {
    std::vector<std::vector<std::complex<double>>> pts;
    for (const auto& p : split(a.points, ';')) pts.push_back(parse_point(p, d));
    add(pts.size(), density_residual(d, alpha, pts));
  } else {
    if (!(a.scale > 0)) throw DomainError("--scale must be positive");
    for (const auto& ks : split(a.roots, ',')) {
      int k = parse_int(ks, "point count");
      if (k < 1) throw DomainError("point counts must be positive");
      std::vector<std::vector<std::complex<double>>> pts;
      for (int i = 0; i < k; ++i) pts.push_back(root_point(d, a.scale, 2.0 * std::numbers::pi * i / k));
      add(static_cast<std::size_t>(k), density_residual(d, alpha, pts));
    }
    j["scale"] = a.scale;
  }
  j["norm_sq"] = moment(d, alpha, Exponent(2, 1)).to_double();
  j["rows"] = rows;
}

void cmd_project(const Args& a, Context& ctx, json& j, Table& t) {
  Domain d = domain_arg(a.domain, ctx);
  if (a.terms.empty()) throw ParseError("project requires --terms");
  MixedMonomialSum f = parse_terms(a.terms, d);
  auto parts = projection_terms(d, f);
  LaurentPoly bf = project(d, f);
  auto term_json = [](const ComplexRational& c, const MultiIndex& al, const MultiIndex& ga) {
    return json{{"c", {c.re.get_d(), c.im.get_d()}},
                {"c_exact", {to_string(c.re), to_string(c.im)}},
                {"alpha", index_json(al)},
                {"gamma", index_json(ga)}};
  };
  json in = json::array(), detail = json::array(), outp = json::array();
  for (const auto& x : f.term_list()) in.push_back(term_json(x.coeff, x.alpha, x.gamma));
  for (const auto& pt : parts)
    detail.push_back({{"alpha", index_json(pt.input.alpha)},
                      {"gamma", index_json(pt.input.gamma)},
                      {"delta", index_json(pt.delta)},
                      {"multiplier", pt.multiplier ? json(to_string(*pt.multiplier)) : json(nullptr)}});
  t.header = {"re", "im", "alpha"};
  for (const auto& x : bf.sum().term_list()) {
    outp.push_back(term_json(x.coeff, x.alpha, x.gamma));
    t.rows.push_back({to_string(x.coeff.re), to_string(x.coeff.im), "\"" + x.alpha.str() + "\""});
  }
  j["domain"] = d.spec();
  j["input"] = in;
  j["terms"] = detail;
  j["output"] = outp;
}

void cmd_probe(const Args& a, Context& ctx, json& j, Table& t) {
  Domain d = domain_arg(a.domain, ctx);
  MultiIndex alpha, gamma;
  if (a.alpha.empty()) {
    RegularityResult r = regularity_probe(d, window_or_default(a, d));
    if (!r.alpha) throw DomainError("no regularity witness on " + d.spec() + "; pass --alpha and --gamma");
    alpha = *r.alpha;
    gamma = *r.gamma;
  } else {
    alpha = parse_index(a.alpha, d);
    gamma = a.gamma.empty() ? MultiIndex(d.dim()) : parse_index(a.gamma, d);
  }
  Exponent lo = parse_exponent(a.plo), hi = parse_exponent(a.phi);
  if (!(lo < hi)) throw DomainError("--plo must be below --phi");
  if (a.steps < 1) throw DomainError("--steps must be positive");
  j["domain"] = d.spec();
  j["alpha"] = index_json(alpha);
  j["gamma"] = index_json(gamma);
  t.header = {"p", "ratio"};
  json rows = json::array();
  for (int k = 0; k <= a.steps; ++k) {
    Rational p = lo.value() + (hi.value() - lo.value()) * make_rational(k, a.steps);
    p.canonicalize();
    std::string cell;
    json row{{"p", to_string(p)}};
    try {
      ProjectionRatio r = projection_ratio(d, alpha, gamma, Exponent(p));
      if (r.divergent) {
        cell = "divergent";
        row["ratio"] = "divergent";
      } else {
        cell = fmt_double(r.ratio);
        row["ratio"] = r.ratio;
      }
    } catch (const NotIntegrable&) {
      cell = "not_integrable";
      row["ratio"] = "not_integrable";
    }
    rows.push_back(row);
    t.rows.push_back({to_string(p), cell});
  }
  j["rows"] = rows;
}

int cmd_verify(const Args& a, Context& ctx, json& j, Table& t) {
  VerifyOptions o;
  std::vector<std::string> specs = a.domains;
  if (specs.empty()) specs = {"polydisc:1", "ball:2", "hartogs:1/1"};
  for (const auto& s : specs) o.domains.push_back(domain_arg(s, ctx));
  o.level = a.full ? VerifyLevel::Full : VerifyLevel::Quick;
  o.seed = ctx.seed;
  o.quad = ctx.quad;
  VerifyReport r = verify(o);
  j["level"] = a.full ? "full" : "quick";
  j["domains"] = specs;
  j["bootstrap_passed"] = r.bootstrap_passed;
  json checks = json::array();
  t.header = {"suite", "domain", "result", "detail"};
  for (const auto& c : r.checks) {
    checks.push_back({{"suite", c.suite}, {"domain", c.domain}, {"passed", c.passed}, {"detail", c.detail}});
    t.rows.push_back({c.suite, c.domain, c.passed ? "pass" : "FAIL", "\"" + c.detail + "\""});
  }
  j["checks"] = checks;
  j["passed"] = r.passed();
  return r.passed() ? kOk : kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bergman space indices of Reinhardt domains", "bergman"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Context ctx;
  Args a;
  std::string format;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool no_timing = false;
  QuadConfig quad;

  auto common = [&](CLI::App* sub, bool csv_default) {
    sub->add_option("--format", format, csv_default ? "json | csv | table (default csv)" : "json | csv | table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    sub->add_option("--seed", seed, "master seed (BERGMAN_SEED overrides)");
    sub->add_option("--threads", threads, "worker pool cap")->check(CLI::PositiveNumber);
    sub->add_flag("--no-timing", no_timing, "omit the timing field from JSON output");
    sub->add_option("--radial-nodes", quad.radial_nodes, "tanh-sinh nodes per cube axis and piece");
    sub->add_option("--angular-nodes", quad.angular_nodes, "trapezoid nodes per angle (0 = automatic)");
    sub->add_option("--cutoff", quad.corner_cutoff, "corner cutoff in [0, 1/2)");
    sub->add_option("--refine", quad.refinement_levels, "corner-cutoff refinement levels");
    sub->add_option("--tol", quad.tolerance, "quadrature tolerance");
  };
  auto domain_pos = [&](CLI::App* sub) { sub->add_option("domain", a.domain, "domain spec")->required(); };

  auto* info = app.add_subcommand("info", "domain summary and exact volume");
  domain_pos(info);
  common(info, false);

  auto* iset = app.add_subcommand("index-set", "members of S(A^p) inside the window");
  domain_pos(iset);
  iset->add_option("--p", a.p, "exponent p (rational)")->required();
  iset->add_option("--window", a.window, "window radius");
  common(iset, false);

  auto* thr = app.add_subcommand("thresholds", "threshold exponents in (plo, phi]");
  domain_pos(thr);
  thr->add_option("--window", a.window, "window radius");
  thr->add_option("--plo", a.plo, "lower end (exclusive)");
  thr->add_option("--phi", a.phi, "upper end (inclusive)");
  common(thr, false);

  auto* ind = app.add_subcommand("indices", "duality bound, regularity probe, beta upper bound");
  domain_pos(ind);
  ind->add_option("--window", a.window, "window radius");
  ind->add_option("--pcap", a.pcap, "search cap for p");
  common(ind, false);

  auto* ker = app.add_subcommand("kernel", "Bergman kernel K(z, w)");
  domain_pos(ker);
  ker->add_option("--z", a.z, "point: comma separated re or re:im")->required();
  ker->add_option("--w", a.w, "second point (default z)");
  ker->add_option("--N", a.series_radius, "series window radius");
  ker->add_option("--p", a.p, "also estimate ||K(., w)||_p by corner-cutoff quadrature");
  common(ker, false);

  auto* den = app.add_subcommand("density", "A^2 residual of e_alpha against kernel spans");
  domain_pos(den);
  den->add_option("--alpha", a.alpha, "target multi-index");
  den->add_option("--roots", a.roots, "comma separated point counts (scaled roots of unity)");
  den->add_option("--scale", a.scale, "root radius");
  den->add_option("--points", a.points, "explicit points separated by ';'");
  common(den, true);

  auto* prj = app.add_subcommand("project", "exact Bergman projection of a mixed monomial sum");
  domain_pos(prj);
  prj->add_option("--terms", a.terms, R"(JSON [{"c":[re,im],"alpha":[..],"gamma":[..]}])")->required();
  common(prj, false);

  auto* prb = app.add_subcommand("probe", "projection norm ratio over a rational p grid");
  domain_pos(prb);
  prb->add_option("--alpha", a.alpha, "alpha (default: regularity witness)");
  prb->add_option("--gamma", a.gamma, "gamma");
  prb->add_option("--plo", a.plo, "first p");
  prb->add_option("--phi", a.phi, "last p");
  prb->add_option("--steps", a.steps, "grid intervals");
  prb->add_option("--window", a.window, "window radius for the default witness");
  common(prb, true);

  auto* ver = app.add_subcommand("verify", "bootstrap oracle and invariant suites");
  ver->add_option("domains", a.domains, "domain specs (default polydisc:1 ball:2 hartogs:1/1)");
  auto* quick = ver->add_flag("--quick", "quick level (default)");
  ver->add_flag("--full", a.full, "full level")->excludes(quick);
  common(ver, false);

  // defaults for the csv subcommands are resolved after parsing
  a.plo = "1";
  a.phi = "5";
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kValidation;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "probe") {
    if (prb->count("--plo") == 0) a.plo = "2";
    if (prb->count("--phi") == 0) a.phi = "6";
  }
  bool csv_default = name == "density" || name == "probe";
  if (format.empty()) format = csv_default ? "csv" : "json";
  ctx.format = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Table;

  if (const char* env = std::getenv("BERGMAN_SEED")) {
    try {
      std::size_t used = 0;
      seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      err << "error: BERGMAN_SEED must be a non-negative integer\n";
      return kValidation;
    }
  }
  ctx.seed = seed;
  ctx.quad = quad;
  ctx.timing = !no_timing;
  // --threads only caps the worker pool, so it stays out of the echo and
  // reports compare equal across thread counts
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--threads" && i + 1 < args.size()) {
      ++i;
      continue;
    }
    if (args[i].rfind("--threads=", 0) == 0) continue;
    ctx.command += (ctx.command.empty() ? "" : " ") + args[i];
  }
  if (threads > 0) set_thread_count(threads);

  auto start = std::chrono::steady_clock::now();
  try {
    quad.validate();
    json j = envelope(ctx);
    j["subcommand"] = name;
    Table t;
    int code = kOk;
    if (name == "info") cmd_info(a, ctx, j, t);
    else if (name == "index-set") cmd_index_set(a, ctx, j, t);
    else if (name == "thresholds") cmd_thresholds(a, ctx, j, t);
    else if (name == "indices") cmd_indices(a, ctx, j, t);
    else if (name == "kernel") cmd_kernel(a, ctx, j, t);
    else if (name == "density") cmd_density(a, ctx, j, t);
    else if (name == "project") cmd_project(a, ctx, j, t);
    else if (name == "probe") cmd_probe(a, ctx, j, t);
    else if (name == "verify") code = cmd_verify(a, ctx, j, t);
    for (const auto& w : ctx.warnings) err << "warning: " << w << "\n";
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(out, ctx, std::move(j), t, secs);
    return code;
  } catch (const Inconclusive& e) {
    err << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const ChainViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return kFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
}

}  // namespace bergman::cli
