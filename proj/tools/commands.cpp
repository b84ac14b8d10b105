#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "aqe/catalog/catalog.hpp"
#include "aqe/error.hpp"
#include "aqe/expr/parser.hpp"
#include "aqe/extension/riemannian_extension.hpp"
#include "aqe/geometry/curvature.hpp"
#include "aqe/projective/projective.hpp"
#include "aqe/solver/jet_system.hpp"
#include "json.hpp"

namespace aqe::cli {

namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<Rational> parse_mu_list(const std::vector<std::string>& mus) {
  std::vector<Rational> out;
  for (const auto& m : mus) out.push_back(parse_rational(m));
  return out;
}

std::vector<Rational> parse_point(const std::string& text, const AffineManifold& m) {
  if (text.empty()) return default_basepoint(m);
  std::vector<Rational> p;
  for (const auto& part : split_top_level(text)) p.push_back(parse_rational(part));
  if (p.size() != m.dim()) throw PreconditionError("basepoint needs " + std::to_string(m.dim()) + " coordinates");
  return p;
}

std::vector<ScalarExpr> parse_components(const std::string& text, const AffineManifold& m) {
  std::vector<ScalarExpr> out;
  for (const auto& part : split_top_level(text)) out.push_back(parse_scalar(part, m.coords()));
  if (out.size() != m.dim()) throw PreconditionError("expected " + std::to_string(m.dim()) + " components");
  return out;
}

// Writes the JSON report; with "-" the JSON replaces the text report on stdout.
bool emit(const Options& o, const Json& doc) {
  if (o.json.empty()) return false;
  if (o.json == "-") {
    std::cout << doc.dump(2) << "\n";
    return true;
  }
  std::ofstream out(o.json);
  if (!out) throw Error("cannot write '" + o.json + "'");
  out << doc.dump(2) << "\n";
  return false;
}

Json tensor_json(const TensorField& t, const std::vector<std::string>& names) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < t.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < t.dim(); ++j) row.push_back(t(i, j).to_string(names));
    rows.push_back(row);
  }
  return rows;
}

std::string tensor_text(const TensorField& t, const std::vector<std::string>& names) {
  std::vector<std::vector<std::string>> cells(t.dim(), std::vector<std::string>(t.dim()));
  std::size_t width = 1;
  for (std::size_t i = 0; i < t.dim(); ++i)
    for (std::size_t j = 0; j < t.dim(); ++j) {
      cells[i][j] = t(i, j).to_string(names);
      width = std::max(width, cells[i][j].size());
    }
  std::ostringstream out;
  for (const auto& row : cells) {
    out << "  [";
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "  " : "") << std::setw(static_cast<int>(width)) << row[j];
    out << "]\n";
  }
  return out.str();
}

Json strings(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

std::vector<FloatPoint> float_samples(std::size_t n, const std::vector<ScalarExpr>& excluded, std::uint64_t seed,
                                      int count) {
  Sampler sampler(seed);
  std::vector<FloatPoint> pts;
  int attempts = 0;
  while (static_cast<int>(pts.size()) < count) {
    if (++attempts > 100 * count) throw DomainError("could not sample points off the excluded locus");
    auto p = sampler.random_float_point(n, 0.25, 1.25);
    bool ok = true;
    for (const auto& e : excluded) {
      if (std::abs(e.evaluate(std::span<const double>(p))) < 1e-6) ok = false;
    }
    if (ok) pts.push_back(std::move(p));
  }
  return pts;
}

catalog::ModelSpec spec_from(const Options& o) {
  catalog::ModelSpec spec;
  spec.family = catalog::parse_family(o.family);
  spec.variant = o.variant;
  spec.sign = o.sign;
  for (const auto& p : o.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw PreconditionError("parameter '" + p + "' is not key=value");
    spec.params[p.substr(0, eq)] = parse_rational(p.substr(eq + 1));
  }
  return spec;
}

}  // namespace

int run_curvature(const Options& o) {
  const auto m = load_manifold_file(o.manifold);
  const auto& names = m.coords();
  const auto parts = ricci(m);
  const auto r = curvature(m);
  Json doc;
  doc["dim"] = m.dim();
  doc["ricci"] = tensor_json(parts.rho, names);
  doc["ricci_symmetric"] = tensor_json(parts.symmetric, names);
  doc["ricci_antisymmetric"] = tensor_json(parts.antisymmetric, names);
  Json comps = Json::object();
  std::ostringstream text;
  const std::size_t n = m.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          const auto& c = r.at({i, j, k, l});
          if (c.is_zero_literal()) continue;
          const std::string key = std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + std::to_string(k + 1) +
                                  "^" + std::to_string(l + 1);
          comps[key] = c.to_string(names);
          text << "  R_" << key << " = " << comps[key].get<std::string>() << "\n";
        }
  doc["curvature"] = comps;
  if (emit(o, doc)) return kOk;
  std::cout << "ricci:\n" << tensor_text(parts.rho, names) << "ricci (symmetric):\n"
            << tensor_text(parts.symmetric, names) << "ricci (antisymmetric):\n"
            << tensor_text(parts.antisymmetric, names) << "curvature (nonzero, i<j):\n"
            << (text.str().empty() ? "  none\n" : text.str());
  return kOk;
}

int run_qe_dim(const Options& o) {
  const auto m = load_manifold_file(o.manifold);
  const auto p = parse_point(o.basepoint, m);
  thread_sampler().reseed(o.seed);
  Json reports = Json::array();
  std::ostringstream text;
  bool all_stable = true;
  for (const auto& mu : parse_mu_list(o.mu)) {
    const auto space = solution_dimension(m, mu, p);
    all_stable = all_stable && space.stabilized;
    reports.push_back(Json::parse(solution_report_json(space)));
    text << "mu = " << to_string(mu) << "  dim = " << space.dim << "  ranks =";
    for (auto r : space.rank_history) text << " " << r;
    text << (space.stabilized ? "  (stabilized)" : "  (NOT stabilized)") << (space.numeric ? "  [numeric]" : "")
         << "\n";
    for (const auto& v : space.basis) {
      text << "  jet (";
      for (std::size_t i = 0; i < v.size(); ++i) text << (i ? ", " : "") << to_string(v[i]);
      text << ")\n";
    }
  }
  const Json doc = reports.size() == 1 ? reports[0] : reports;
  if (!emit(o, doc)) std::cout << text.str();
  return all_stable ? kOk : kViolation;
}

int run_classify(const Options& o) {
  const auto spec = spec_from(o);
  const auto model = catalog::build_model(spec);
  const auto p = parse_point(o.basepoint, model);
  Json doc;
  doc["model"] = spec.describe();
  Json consts = Json::object();
  for (const auto& [k, v] : catalog::constants(spec)) consts[k] = to_string(v);
  doc["constants"] = consts;
  doc["basepoint"] = strings(p);
  Json results = Json::array();
  std::ostringstream text;
  text << spec.describe() << "\n";
  bool ok = true;
  for (const auto& mu : parse_mu_list(o.mu)) {
    const auto c = catalog::crosscheck(spec, mu, p);
    ok = ok && c.agree() && c.stabilized;
    Json r;
    r["mu"] = to_string(mu);
    if (c.predicted) {
      r["predicted"] = *c.predicted;
    } else {
      r["predicted"] = "not-covered";
    }
    r["computed"] = c.computed;
    r["agree"] = c.agree();
    results.push_back(r);
    text << "  mu = " << std::setw(6) << to_string(mu) << "  predicted = " << std::setw(11)
         << (c.predicted ? std::to_string(*c.predicted) : "not-covered") << "  computed = " << c.computed
         << (c.agree() ? "" : "  DISAGREE") << "\n";
  }
  doc["results"] = results;
  if (!emit(o, doc)) std::cout << text.str();
  return ok ? kOk : kViolation;
}

int run_sweep(const Options& o) {
  const auto family = catalog::parse_family(o.family);
  Sampler sampler(o.seed);
  thread_sampler().reseed(o.seed);
  std::vector<catalog::ModelSpec> models;
  switch (family) {
    case catalog::Family::kTypeA:
      for (int i = 0; i < o.n; ++i) models.push_back(catalog::random_type_a(sampler));
      break;
    case catalog::Family::kTypeB:
      for (int i = 0; i < o.n; ++i) models.push_back(catalog::random_type_b(sampler));
      break;
    case catalog::Family::kTC3:
      for (int i = 0; i < o.n; ++i) models.push_back(catalog::random_tc3_family1(sampler));
      break;
    case catalog::Family::kExampleB2:
      models = catalog::example_b2_grid();
      break;
    default:
      throw PreconditionError("sweep supports typeA, typeB, tc3 and exampleB2");
  }
  const auto mus = parse_mu_list(o.mu);
  const auto report = catalog::sweep(models, mus);
  Json doc;
  doc["family"] = o.family;
  doc["seed"] = o.seed;
  Json rows = Json::array();
  std::map<std::size_t, int> histogram;
  int failures = 0;
  std::ostringstream text;
  text << std::left << std::setw(6) << "dim" << std::setw(12) << "predicted" << std::setw(8) << "mu" << "model\n";
  for (const auto& row : report.rows) {
    Json r;
    Json params = Json::object();
    for (const auto& [k, v] : catalog::constants(row.spec)) params[k] = to_string(v);
    r["params"] = params;
    r["mu"] = to_string(row.mu);
    r["dim"] = row.dim;
    if (row.predicted) r["predicted"] = *row.predicted;
    if (!row.error.empty()) {
      r["error"] = row.error;
      ++failures;
    } else {
      ++histogram[row.dim];
    }
    rows.push_back(r);
    text << std::setw(6) << (row.error.empty() ? std::to_string(row.dim) : "err") << std::setw(12)
         << (row.predicted ? std::to_string(*row.predicted) : "-") << std::setw(8) << to_string(row.mu)
         << row.spec.describe() << (row.error.empty() ? "" : "  (" + row.error + ")") << "\n";
  }
  doc["rows"] = rows;
  Json hist = Json::object();
  text << "dimensions:";
  for (const auto& [d, c] : histogram) {
    hist[std::to_string(d)] = c;
    text << " " << d << "x" << c;
  }
  text << "\n";
  doc["histogram"] = hist;
  doc["violations"] = report.violations;
  doc["failures"] = failures;
  for (const auto& v : report.violations) text << "VIOLATION " << v << "\n";
  if (failures) text << failures << " cell(s) failed\n";
  if (!emit(o, doc)) std::cout << text.str();
  return report.ok() && failures == 0 ? kOk : kViolation;
}

int run_deform(const Options& o) {
  const auto m = load_manifold_file(o.manifold);
  ProjectiveChange change;
  if (!o.potential.empty()) {
    change = ProjectiveChange::from_potential(parse_scalar(o.potential, m.coords()));
  } else if (!o.omega.empty()) {
    change = ProjectiveChange::from_form(parse_components(o.omega, m));
  } else {
    throw PreconditionError("deform needs --omega or --potential");
  }
  const auto d = deform(m, change);
  const Verdict preserved = (ricci(d).antisymmetric - ricci(m).antisymmetric).is_zero();
  if (!o.json.empty()) {
    const std::string text = manifold_to_json(d);
    if (o.json == "-") {
      std::cout << text << "\n";
      return kOk;
    }
    std::ofstream out(o.json);
    if (!out) throw Error("cannot write '" + o.json + "'");
    out << text << "\n";
  }
  std::cout << "strong: " << (change.strong ? "yes" : "no") << "\n"
            << "alternating Ricci preserved: " << to_string(preserved) << "\n"
            << "deformed Christoffel symbols:\n";
  const std::size_t n = d.dim();
  bool any = false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const auto& g = d.christoffel(i, j, k);
        if (g.is_zero_literal()) continue;
        any = true;
        std::cout << "  " << d.symbol_to_string(i, j, k) << " = " << g.to_string(d.coords()) << "\n";
      }
  if (!any) std::cout << "  none\n";
  return kOk;
}

int run_flatten(const Options& o) {
  const auto m = load_manifold_file(o.manifold);
  const auto p = parse_point(o.basepoint, m);
  FloatPoint pf;
  for (const auto& x : p) pf.push_back(to_double(x));
  const double radius = o.radius > 0.0 ? o.radius : default_chart_radius(m, pf);
  FlatChart chart;
  try {
    chart = flat_chart(m, p, square_grid(pf, radius, o.grid), radius);
  } catch (const PreconditionError& e) {
    std::cerr << e.what() << "\n";
    return kViolation;
  }
  const double deviation = o.geodesics > 0 ? geodesic_straightness(m, chart, o.geodesics, o.seed) : 0.0;
  Json doc = Json::parse(flat_chart_json(chart));
  doc["radius"] = radius;
  doc["geodesics"] = o.geodesics;
  doc["max_geodesic_deviation"] = deviation;
  if (emit(o, doc)) return kOk;
  std::cout << "flat chart at (";
  for (std::size_t i = 0; i < p.size(); ++i) std::cout << (i ? ", " : "") << to_string(p[i]);
  std::cout << "), radius " << radius << ", " << chart.points.size() << " grid points\n";
  std::cout << std::setprecision(12);
  for (std::size_t g = 0; g < chart.points.size(); ++g) {
    std::cout << "  x = (";
    for (std::size_t i = 0; i < chart.points[g].size(); ++i) std::cout << (i ? ", " : "") << chart.points[g][i];
    std::cout << ")  z = (";
    for (std::size_t i = 0; i < chart.z[g].size(); ++i) std::cout << (i ? ", " : "") << chart.z[g][i];
    std::cout << ")\n";
  }
  std::cout << std::setprecision(3) << "max relative geodesic deviation over " << o.geodesics
            << " geodesics: " << deviation << "\n";
  return kOk;
}

int run_extend(const Options& o) {
  const auto m = load_manifold_file(o.manifold);
  const std::size_t d = m.dim();
  std::vector<ScalarExpr> phi(d * d, ScalarExpr::constant(d, 0));
  for (const auto& entry : o.phi) {
    const auto eq = entry.find('=');
    std::size_t i = 0, j = 0;
    char comma = 0;
    std::istringstream key(entry.substr(0, eq == std::string::npos ? 0 : eq));
    if (eq == std::string::npos || !(key >> i >> comma >> j) || comma != ',' || i < 1 || j < 1 || i > d || j > d) {
      throw PreconditionError("Phi entry '" + entry + "' is not i,j=expr");
    }
    const auto value = parse_scalar(entry.substr(eq + 1), m.coords());
    phi[(i - 1) * d + (j - 1)] = value;
    phi[(j - 1) * d + (i - 1)] = value;
  }
  const auto g = deformed_extension(m, phi);
  Json doc;
  Json metric = Json::object();
  std::ostringstream text;
  text << "metric (nonzero components, a <= b):\n";
  for (std::size_t a = 0; a < g.n; ++a)
    for (std::size_t b = a; b < g.n; ++b) {
      if (g(a, b).is_zero_literal()) continue;
      const std::string key = g.coords[a] + "," + g.coords[b];
      metric[key] = g(a, b).to_string(g.coords);
      text << "  g[" << key << "] = " << metric[key].get<std::string>() << "\n";
    }
  doc["coords"] = g.coords;
  doc["metric"] = metric;
  bool ok = true;
  if (!o.f.empty()) {
    const auto f = parse_scalar(o.f, m.coords());
    const auto res = extension_identities_residuals(m, phi, f);
    Json ids;
    ids["hessian_pullback"] = to_string(res.hessian_defect.is_zero());
    ids["ricci_pullback"] = to_string(res.ricci_defect.is_zero());
    ids["null_gradient"] = to_string(is_identically_zero(res.null_gradient));
    doc["identities"] = ids;
    ok = ok && holds(res.verdict());
    text << "Hessian pullback defect: " << ids["hessian_pullback"].get<std::string>() << "\n"
         << "Ricci pullback defect:   " << ids["ricci_pullback"].get<std::string>() << "\n"
         << "null gradient defect:    " << ids["null_gradient"].get<std::string>() << "\n";
    if (!o.mu.empty()) {
      const Rational mu = parse_rational(o.mu.front());
      const Verdict solves = apply_qe_operator(m, mu, f).is_zero();
      const auto [psi, mu_n] = quasi_einstein_potential(f, mu);
      const auto lc = levi_civita(g);
      const auto residual = quasi_einstein_residual(g, lc, psi.lifted(g.n), mu_n);
      const auto pts = float_samples(g.n, g.excluded, o.seed, 20);
      const double worst = residual.max_abs(pts);
      Json qe;
      qe["f_solves"] = to_string(solves);
      qe["potential"] = psi.to_string(m.coords());
      qe["mu"] = to_string(mu_n);
      qe["lambda"] = "0";
      qe["samples"] = pts.size();
      qe["max_residual"] = worst;
      doc["quasi_einstein"] = qe;
      ok = ok && holds(solves) && worst < 1e-8;
      text << "f in E(" << to_string(mu) << "): " << to_string(solves) << "\n"
           << "quasi-Einstein potential " << qe["potential"].get<std::string>() << ", mu = " << to_string(mu_n)
           << ", max residual over " << pts.size() << " points: " << worst << "\n";
    }
  }
  if (!emit(o, doc)) std::cout << text.str();
  return ok ? kOk : kViolation;
}

int run_verify(const Options& o) {
  const auto m = load_manifold_file(o.manifold);
  if (o.f.empty() && o.killing.empty()) throw PreconditionError("verify needs --f (with --mu) or --killing");
  Json doc;
  std::ostringstream text;
  bool ok = true;
  if (!o.f.empty()) {
    if (o.mu.empty()) throw PreconditionError("--f needs --mu");
    const Rational mu = parse_rational(o.mu.front());
    const auto f = parse_scalar(o.f, m.coords());
    const auto q = apply_qe_operator(m, mu, f);
    const Verdict v = q.is_zero();
    ok = ok && holds(v);
    doc["mu"] = to_string(mu);
    doc["f"] = f.to_string(m.coords());
    doc["solution"] = to_string(v);
    doc["residual"] = tensor_json(q, m.coords());
    text << "Q_mu f = 0: " << to_string(v) << "\n" << tensor_text(q, m.coords());
  }
  if (!o.killing.empty()) {
    const auto x = parse_components(o.killing, m);
    const Verdict v = is_affine_killing(m, x);
    ok = ok && holds(v);
    doc["affine_killing"] = to_string(v);
    text << "affine Killing: " << to_string(v) << "\n";
  }
  if (!emit(o, doc)) std::cout << text.str();
  return ok ? kOk : kViolation;
}

}  // namespace aqe::cli
