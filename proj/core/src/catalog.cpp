#include "aqe/catalog/catalog.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "aqe/error.hpp"
#include "aqe/geometry/curvature.hpp"

namespace aqe::catalog {

namespace {

using Table = std::map<AffineManifold::Index3, Rational>;

const std::array<const char*, 6> kSurfaceKeys = {"1,1^1", "1,1^2", "1,2^1", "1,2^2", "2,2^1", "2,2^2"};

AffineManifold::Index3 key_index(const std::string& key) {
  return {static_cast<std::size_t>(key[0] - '1'), static_cast<std::size_t>(key[2] - '1'),
          static_cast<std::size_t>(key[4] - '1')};
}

std::string index_key(const AffineManifold::Index3& idx) {
  const auto [i, j, k] = idx;
  return std::to_string(i + 1) + "," + std::to_string(j + 1) + "^" + std::to_string(k + 1);
}

bool is_type_b_family(Family f) { return f == Family::kTypeB || f == Family::kTC2 || f == Family::kTC3; }
bool is_type_a_surface_family(Family f) {
  return f == Family::kTypeA || f == Family::kExampleEA2 || f == Family::kExampleEA3;
}

std::vector<std::string> free_keys(const ModelSpec& spec) {
  switch (spec.family) {
    case Family::kTypeA:
    case Family::kTypeB:
      return {kSurfaceKeys.begin(), kSurfaceKeys.end()};
    case Family::kExampleB1:
      return {};
    case Family::kExampleB2:
      return {"x", "y", "z", "w"};
    case Family::kExampleEA2:
    case Family::kExampleEA3:
      return {"1,1^2", "1,2^2", "2,2^2"};
    case Family::kTC2:
      if (spec.variant == "1a") return {"1,1^1", "1,1^2", "1,2^1", "1,2^2"};
      if (spec.variant == "1b") return {"1,1^2", "1,2^2"};
      if (spec.variant == "2a") return {"1,1^1", "1,1^2", "1,2^2"};
      if (spec.variant == "2b") return {"1,2^2"};
      break;
    case Family::kTC3:
      if (spec.variant == "1") return {"1,1^1", "1,1^2", "1,2^2"};
      if (spec.variant == "2a") return {"1,2^2"};
      if (spec.variant == "2b") return {"1,1^2"};
      break;
  }
  throw PreconditionError("unknown variant '" + spec.variant + "' for family " + family_name(spec.family));
}

void validate(const ModelSpec& spec) {
  const auto keys = free_keys(spec);
  for (const auto& k : keys) {
    if (!spec.params.count(k)) throw PreconditionError("missing parameter '" + k + "' for " + family_name(spec.family));
  }
  for (const auto& [k, v] : spec.params) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw PreconditionError("unexpected parameter '" + k + "' for " + family_name(spec.family));
    }
  }
  if ((spec.family == Family::kTC2 || spec.family == Family::kTC3) && spec.sign != 1 && spec.sign != -1) {
    throw PreconditionError("sign must be +1 or -1");
  }
}

Table table(const ModelSpec& spec) {
  validate(spec);
  Table t;
  auto p = [&](const char* key) { return spec.params.at(key); };
  auto set = [&](const char* key, const Rational& v) {
    if (v != 0) t[key_index(key)] = v;
  };
  const Rational s(spec.sign);
  switch (spec.family) {
    case Family::kTypeA:
    case Family::kTypeB:
      for (const char* k : kSurfaceKeys) set(k, p(k));
      break;
    case Family::kExampleB1:
      set("1,2^3", 1);
      set("1,3^1", 3);
      set("2,3^2", 4);
      set("3,3^3", 5);
      break;
    case Family::kExampleB2:
      set("1,1^1", p("z"));
      set("1,2^1", 1);
      set("1,3^1", p("x"));
      set("2,2^2", 1);
      set("2,3^1", p("x"));
      set("3,3^2", p("y"));
      set("3,3^3", p("w"));
      break;
    case Family::kExampleEA2:
      set("1,1^1", 1);
      [[fallthrough]];
    case Family::kExampleEA3:
      set("1,1^2", p("1,1^2"));
      set("1,2^2", p("1,2^2"));
      set("2,2^2", p("2,2^2"));
      break;
    case Family::kTC2:
      if (spec.variant == "1a") {
        for (const char* k : {"1,1^1", "1,1^2", "1,2^1", "1,2^2"}) set(k, p(k));
        set("2,2^2", p("1,2^1"));
      } else if (spec.variant == "1b") {
        const Rational b = p("1,1^2");
        set("1,1^2", b);
        set("1,2^2", p("1,2^2"));
        set("2,2^1", s);
        set("2,2^2", 2 * s * b);
        set("1,1^1", 1 + 2 * p("1,2^2") + s * b * b);
      } else if (spec.variant == "2a") {
        for (const char* k : {"1,1^1", "1,1^2", "1,2^2"}) set(k, p(k));
      } else {
        set("1,2^2", p("1,2^2"));
        set("1,1^1", 1 + 2 * p("1,2^2"));
        set("2,2^1", s);
      }
      break;
    case Family::kTC3:
      if (spec.variant == "1") {
        const Rational b = p("1,1^2");
        set("1,1^1", p("1,1^1"));
        set("1,1^2", b);
        set("1,2^2", p("1,2^2"));
        set("2,2^1", s);
        set("2,2^2", 2 * s * b);
      } else if (spec.variant == "2a") {
        set("1,2^2", p("1,2^2"));
        set("1,1^1", p("1,2^2") - 1);
        set("2,2^1", s);
      } else {
        const Rational b = p("1,1^2");
        set("1,1^2", b);
        set("1,1^1", Rational(-(5 + 16 * s * b * b)) / 2);
        set("1,2^2", Rational(-(3 + 8 * s * b * b)) / 2);
        set("2,2^1", s);
        set("2,2^2", 2 * s * b);
      }
      break;
  }
  return t;
}

Rational c_of(const Table& t, std::size_t i, std::size_t j, std::size_t k) {
  if (i > j) std::swap(i, j);
  auto it = t.find({i, j, k});
  return it == t.end() ? Rational(0) : it->second;
}

struct SurfaceFacts {
  bool flat = false;
  std::size_t rho_rank = 0;
  bool rho_s_zero = false;
};

SurfaceFacts surface_facts(const AffineManifold& m) {
  const auto parts = ricci(m);
  SurfaceFacts f;
  f.flat = holds(parts.rho.is_zero());
  f.rho_s_zero = holds(parts.symmetric.is_zero());
  f.rho_rank = rank_at(parts.rho, default_basepoint(m));
  return f;
}

}  // namespace

Family parse_family(const std::string& name) {
  static const std::map<std::string, Family> names = {
      {"typeA", Family::kTypeA},           {"typeB", Family::kTypeB},           {"exampleB1", Family::kExampleB1},
      {"exampleB2", Family::kExampleB2},   {"exampleEA2", Family::kExampleEA2}, {"exampleEA3", Family::kExampleEA3},
      {"tc2", Family::kTC2},               {"tc3", Family::kTC3}};
  auto it = names.find(name);
  if (it == names.end()) throw PreconditionError("unknown family '" + name + "'");
  return it->second;
}

std::string family_name(Family family) {
  switch (family) {
    case Family::kTypeA: return "typeA";
    case Family::kTypeB: return "typeB";
    case Family::kExampleB1: return "exampleB1";
    case Family::kExampleB2: return "exampleB2";
    case Family::kExampleEA2: return "exampleEA2";
    case Family::kExampleEA3: return "exampleEA3";
    case Family::kTC2: return "tc2";
    case Family::kTC3: return "tc3";
  }
  return "?";
}

std::size_t family_dimension(Family family) {
  return family == Family::kExampleB1 || family == Family::kExampleB2 ? 3 : 2;
}

std::string ModelSpec::describe() const {
  std::ostringstream out;
  out << family_name(family);
  if (!variant.empty()) out << ":" << variant << (sign > 0 ? "+" : "-");
  for (const auto& [k, v] : params) out << " " << k << "=" << to_string(v);
  return out.str();
}

std::map<std::string, Rational> constants(const ModelSpec& spec) {
  std::map<std::string, Rational> out;
  for (const auto& [idx, v] : table(spec)) out[index_key(idx)] = v;
  return out;
}

AffineManifold build_model(const ModelSpec& spec) {
  const Table t = table(spec);
  const std::size_t m = family_dimension(spec.family);
  std::map<AffineManifold::Index3, ScalarExpr> symbols;
  std::vector<ScalarExpr> excluded;
  const bool type_b = is_type_b_family(spec.family);
  if (type_b) excluded.push_back(ScalarExpr::coordinate(m, 0));
  for (const auto& [idx, c] : t) {
    ScalarExpr v = ScalarExpr::constant(m, c);
    if (type_b) v = v / ScalarExpr::coordinate(m, 0);
    symbols[idx] = v;
  }
  return AffineManifold::from_symbols(default_coordinate_names(m), symbols, std::move(excluded));
}

std::optional<Rational> tc3_eigenvalue(const ModelSpec& spec) {
  if (!is_type_b_family(spec.family)) return std::nullopt;
  const Table t = table(spec);
  const Rational c221 = c_of(t, 1, 1, 0);
  if (c221 != 1 && c221 != -1) return std::nullopt;
  const Rational s = c221;
  if (c_of(t, 0, 1, 0) != 0) return std::nullopt;
  const Rational b = c_of(t, 0, 0, 1);
  if (c_of(t, 1, 1, 1) != 2 * s * b) return std::nullopt;
  const Rational c111 = c_of(t, 0, 0, 0);
  const Rational c122 = c_of(t, 0, 1, 1);
  const Rational delta = 1 - c111 + c122;
  if (delta == 0) return std::nullopt;
  const Rational diff = c111 - c122;
  Rational mu = (1 + 2 * c122 + 2 * s * b * b - diff * diff) / (delta * delta);
  return mu;
}

std::optional<std::size_t> expected_dimension(const ModelSpec& spec, const Rational& mu) {
  const Table t = table(spec);
  if (spec.family == Family::kExampleB1) {
    if (mu == Rational(-3, 5)) return 2;
    if (mu == 0) return 1;
    return 0;
  }
  if (spec.family == Family::kExampleB2) {
    if (mu != Rational(-1, 2)) return std::nullopt;
    const Rational x = spec.params.at("x"), z = spec.params.at("z"), w = spec.params.at("w");
    if (x == 0 || (w == x && z == 1)) return 4;
    if (z == 1) return 2;  // x != 0, w != x
    if (z == 0) return 0;
    const Rational special = (x + 2 * x * z - x * z * z) / (2 * z);
    return w == special ? 1 : 0;
  }

  const AffineManifold model = build_model(spec);
  const SurfaceFacts facts = surface_facts(model);
  if (facts.flat) return 3;
  const auto rank_rule = [&]() -> std::optional<std::size_t> {
    if (facts.rho_rank == 1) return 2;
    if (facts.rho_rank == 2) return 0;
    return std::nullopt;
  };

  if (is_type_a_surface_family(spec.family)) {
    if (mu == -1) return 3;
    if (mu == 0) {
      const bool first_row_zero = c_of(t, 0, 1, 0) == 0 && c_of(t, 1, 1, 0) == 0;
      const Rational g111 = c_of(t, 0, 0, 0);
      if (first_row_zero && (g111 == 1 || g111 == 0)) return 2;
      return std::nullopt;
    }
    return rank_rule();
  }

  // Type B surfaces.
  const Rational c111 = c_of(t, 0, 0, 0), c112 = c_of(t, 0, 0, 1), c121 = c_of(t, 0, 1, 0);
  const Rational c122 = c_of(t, 0, 1, 1), c221 = c_of(t, 1, 1, 0), c222 = c_of(t, 1, 1, 1);
  const bool also_type_a = c121 == 0 && c221 == 0 && c222 == 0;
  if (mu == 0) {
    const std::array<Rational, 3> first = {c111, c121, c221};
    const std::array<Rational, 3> second = {c112, c122, c222};
    if (c121 == 0 && c221 == 0) return 2;
    if (second[0] == 0 && second[1] == 0 && second[2] == 0) return 2;
    const bool parallel = first[0] * second[1] == first[1] * second[0] && first[0] * second[2] == first[2] * second[0] &&
                          first[1] * second[2] == first[2] * second[1];
    if (parallel) return 2;
    return std::nullopt;
  }
  const bool unit = c221 == 1 || c221 == -1;
  if (mu == -1) {
    if (also_type_a) return 3;
    if (c111 == 1 + 2 * c122 && c112 == 0 && c121 == 0 && c122 != 0 && unit && c222 == 0) return 3;
    if (c221 == 0 && c222 == c121 && c121 != 0) return 1;
    if (unit && c121 == 0 && c222 == 2 * c221 * c112 && c222 != 0 && c111 == 1 + 2 * c122 + c221 * c112 * c112) return 1;
    return std::nullopt;
  }
  if (also_type_a) return rank_rule();
  if (facts.rho_s_zero) return std::nullopt;
  const auto special = tc3_eigenvalue(spec);
  if (!special) return std::nullopt;
  if (mu != *special) return 0;
  const bool case_2a = c111 == c122 - 1 && c112 == 0 && c222 == 0 && c122 != 0;
  const bool case_2b = c112 != 0 && c111 == Rational(-(5 + 16 * c221 * c112 * c112)) / 2 &&
                       c122 == Rational(-(3 + 8 * c221 * c112 * c112)) / 2;
  return case_2a || case_2b ? 2 : 1;
}

CrossCheck crosscheck(const ModelSpec& spec, const Rational& mu, std::span<const Rational> basepoint) {
  const AffineManifold model = build_model(spec);
  CrossCheck c;
  c.predicted = expected_dimension(spec, mu);
  const auto space = basepoint.empty() ? solution_dimension(model, mu) : solution_dimension(model, mu, basepoint);
  c.computed = space.dim;
  c.stabilized = space.stabilized;
  return c;
}

SweepReport sweep(std::span<const ModelSpec> models, std::span<const Rational> mus) {
  SweepReport report;
  for (const auto& spec : models) {
    std::optional<AffineManifold> model;
    std::string build_error;
    try {
      model.emplace(build_model(spec));
    } catch (const Error& e) {
      build_error = e.what();
    }
    if (!model) {
      for (const auto& mu : mus) report.rows.push_back({spec, mu, 0, std::nullopt, build_error});
      continue;
    }
    const std::size_t m = model->dim();
    const auto parts = ricci(*model);
    const bool flat = holds(parts.rho.is_zero());
    const auto basepoint = default_basepoint(*model);
    const std::size_t rho_rank = rank_at(parts.rho, basepoint);
    bool type_a_surface = is_type_a_surface_family(spec.family);
    if (is_type_b_family(spec.family)) {
      const Table t = table(spec);
      type_a_surface = c_of(t, 0, 1, 0) == 0 && c_of(t, 1, 1, 0) == 0 && c_of(t, 1, 1, 1) == 0;
    }
    Rational mu_m(-1, static_cast<long>(m - 1));
    mu_m.canonicalize();
    for (const auto& mu : mus) {
      SweepRow row{spec, mu, 0, std::nullopt, {}};
      const std::string where = spec.describe() + " mu=" + to_string(mu);
      try {
        const auto space = solution_dimension(*model, mu, basepoint);
        row.dim = space.dim;
        if (!space.stabilized) row.error = "prolongation did not stabilize";
        row.predicted = expected_dimension(spec, mu);
      } catch (const Error& e) {
        row.error = e.what();
        report.rows.push_back(std::move(row));
        continue;
      }
      if (row.dim > m + 1) report.violations.push_back(where + ": dim exceeds m+1");
      if (m == 2 && mu == -1 && row.dim == 2) report.violations.push_back(where + ": surface with dim E(-1) = 2");
      if (spec.family == Family::kExampleB2 && row.dim == 3) report.violations.push_back(where + ": exampleB2 with dim 3");
      if (type_a_surface && !flat && mu != 0 && mu != -1) {
        const std::size_t expect = rho_rank == 1 ? 2 : 0;
        if (row.dim != expect) report.violations.push_back(where + ": rank dichotomy fails");
      }
      if (row.dim == m + 1 && mu != mu_m && !flat) report.violations.push_back(where + ": full dimension with rho != 0");
      if (row.predicted && *row.predicted != row.dim) {
        report.violations.push_back(where + ": predicted " + std::to_string(*row.predicted) + ", computed " +
                                    std::to_string(row.dim));
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

namespace {

Rational random_constant(Sampler& sampler) {
  const long den = static_cast<long>(sampler.next() % 3) + 1;
  const long span = 6 * den + 1;
  const long num = static_cast<long>(sampler.next() % static_cast<std::uint64_t>(span)) - 3 * den;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

ModelSpec random_surface(Sampler& sampler, Family family) {
  for (;;) {
    ModelSpec spec{family, "", 1, {}};
    for (const char* k : kSurfaceKeys) spec.params[k] = random_constant(sampler);
    if (!holds(ricci(build_model(spec)).rho.is_zero())) return spec;
  }
}

}  // namespace

ModelSpec random_type_a(Sampler& sampler) { return random_surface(sampler, Family::kTypeA); }
ModelSpec random_type_b(Sampler& sampler) { return random_surface(sampler, Family::kTypeB); }

ModelSpec random_tc3_family1(Sampler& sampler) {
  for (;;) {
    ModelSpec spec{Family::kTC3, "1", sampler.next() % 2 == 0 ? 1 : -1, {}};
    for (const char* k : {"1,1^1", "1,1^2", "1,2^2"}) spec.params[k] = random_constant(sampler);
    const auto mu = tc3_eigenvalue(spec);
    if (!mu || *mu == 0 || *mu == -1) continue;
    if (holds(ricci(build_model(spec)).symmetric.is_zero())) continue;
    return spec;
  }
}

std::vector<ModelSpec> example_b2_grid() {
  std::vector<ModelSpec> grid;
  for (int z : {0, 1, 2})
    for (int x : {0, 1})
      for (int y : {0, 1}) {
        std::vector<Rational> ws = {Rational(0), Rational(x), Rational(3)};
        if (z != 0) {
          Rational special = Rational(x + 2 * x * z - x * z * z) / (2 * z);
          ws.push_back(special);
        }
        std::set<Rational> unique(ws.begin(), ws.end());
        for (const auto& w : unique) {
          grid.push_back({Family::kExampleB2, "", 1, {{"x", x}, {"y", y}, {"z", z}, {"w", w}}});
        }
      }
  return grid;
}

ScalarExpr alpha_invariant(const AffineManifold& m) {
  const auto rho = ricci(m).rho;
  const auto nabla = covariant_derivative(m, rho);
  const std::size_t n = m.dim();
  if (holds(is_identically_zero(rho(0, 0)))) throw PreconditionError("rho_11 vanishes identically");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        if (!holds(is_identically_zero(nabla(i, j, k)))) {
          throw PreconditionError("nabla rho is not a multiple of dx1 dx1 dx1");
        }
      }
  return nabla(0, 0, 0).pow(2) / rho(0, 0).pow(3);
}

Rational alpha_closed_form(const ModelSpec& spec) {
  if (spec.family != Family::kExampleEA2) throw PreconditionError("closed form applies to exampleEA2 only");
  const Rational g112 = spec.params.at("1,1^2"), g122 = spec.params.at("1,2^2"), g222 = spec.params.at("2,2^2");
  const Rational d = g122 - g122 * g122 + g112 * g222;
  if (d == 0) throw DomainError("closed form has a vanishing denominator");
  return Rational(4) / d;
}

}  // namespace aqe::catalog
