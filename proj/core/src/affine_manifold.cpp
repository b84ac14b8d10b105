#include "aqe/geometry/affine_manifold.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "aqe/error.hpp"
#include "aqe/expr/parser.hpp"
#include "aqe/expr/zero_test.hpp"
#include "json.hpp"

namespace aqe {

AffineManifold::AffineManifold(std::vector<std::string> coords, std::vector<ScalarExpr> gamma,
                               std::vector<ScalarExpr> excluded)
    : coords_(std::move(coords)), gamma_(std::move(gamma)), excluded_(std::move(excluded)) {
  const std::size_t m = coords_.size();
  if (m < 2) throw InvalidManifold("manifold dimension must be at least 2");
  if (m > kMaxVars) throw InvalidManifold("manifold dimension exceeds the supported maximum");
  if (gamma_.size() != m * m * m) throw InvalidManifold("Christoffel grid must hold dim^3 entries");
  for (const auto& g : gamma_) {
    if (g.nvars() != m) throw InvalidManifold("Christoffel symbol lives on a chart of the wrong dimension");
  }
  for (const auto& e : excluded_) {
    if (e.nvars() != m) throw InvalidManifold("excluded expression lives on a chart of the wrong dimension");
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        if (!holds(is_identically_zero(christoffel(i, j, k) - christoffel(j, i, k)))) {
          throw InvalidManifold("asymmetric Christoffel symbol " + symbol_to_string(i, j, k) +
                                " != " + symbol_to_string(j, i, k));
        }
      }
    }
  }
}

AffineManifold AffineManifold::from_symbols(std::vector<std::string> coords, const std::map<Index3, ScalarExpr>& symbols,
                                            std::vector<ScalarExpr> excluded) {
  const std::size_t m = coords.size();
  std::vector<ScalarExpr> gamma(m * m * m, ScalarExpr::constant(m, 0));
  for (const auto& [idx, value] : symbols) {
    const auto [i, j, k] = idx;
    if (i >= m || j >= m || k >= m) throw InvalidManifold("Christoffel index out of range");
    gamma[(i * m + j) * m + k] = value;
    gamma[(j * m + i) * m + k] = value;
  }
  return AffineManifold(std::move(coords), std::move(gamma), std::move(excluded));
}

AffineManifold AffineManifold::flat(std::size_t dim) {
  return from_symbols(default_coordinate_names(dim), {});
}

bool AffineManifold::rational_only() const noexcept {
  for (const auto& g : gamma_) {
    if (!g.rational_only()) return false;
  }
  return true;
}

bool AffineManifold::on_excluded_locus(std::span<const Rational> point) const {
  for (const auto& e : excluded_) {
    try {
      if (e.rational_only()) {
        if (e.evaluate(point) == 0) return true;
      } else if (std::abs(e.evaluate_float(point)) < 1e-12) {
        return true;
      }
    } catch (const DomainError&) {
      return true;
    }
  }
  // A pole of a Christoffel symbol is treated as excluded even when not listed.
  for (const auto& g : gamma_) {
    if (!g.rational_only()) continue;
    try {
      (void)g.evaluate(point);
    } catch (const DomainError&) {
      return true;
    }
  }
  return false;
}

bool AffineManifold::on_excluded_locus(std::span<const double> point, double tolerance) const {
  for (const auto& e : excluded_) {
    try {
      const double v = e.evaluate(point);
      if (!std::isfinite(v) || std::abs(v) <= tolerance) return true;
    } catch (const DomainError&) {
      return true;
    }
  }
  return false;
}

std::string AffineManifold::symbol_to_string(std::size_t i, std::size_t j, std::size_t k) const {
  return "Gamma_" + std::to_string(i + 1) + std::to_string(j + 1) + "^" + std::to_string(k + 1);
}

namespace {

AffineManifold::Index3 parse_key(const std::string& key, std::size_t m) {
  // "i,j^k", 1-based
  std::size_t i = 0, j = 0, k = 0;
  char comma = 0, caret = 0;
  std::istringstream in(key);
  if (!(in >> i >> comma >> j >> caret >> k) || comma != ',' || caret != '^' || !(in >> std::ws).eof()) {
    throw InvalidManifold("malformed Christoffel key '" + key + "' (expected \"i,j^k\")");
  }
  if (i < 1 || j < 1 || k < 1 || i > m || j > m || k > m) {
    throw InvalidManifold("Christoffel key '" + key + "' out of range");
  }
  return {i - 1, j - 1, k - 1};
}

}  // namespace

AffineManifold load_manifold(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidManifold(std::string("manifold document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc["dim"].is_number_integer()) {
    throw InvalidManifold("manifold document needs an integer \"dim\"");
  }
  const auto dim = doc["dim"].get<long>();
  if (dim < 2 || dim > static_cast<long>(kMaxVars)) throw InvalidManifold("bad manifold dimension");
  const auto m = static_cast<std::size_t>(dim);
  std::vector<std::string> coords;
  if (doc.contains("coords")) {
    coords = doc["coords"].get<std::vector<std::string>>();
    if (coords.size() != m) throw InvalidManifold("\"coords\" length differs from \"dim\"");
  } else {
    coords = default_coordinate_names(m);
  }
  std::map<AffineManifold::Index3, ScalarExpr> symbols;
  std::map<AffineManifold::Index3, std::string> source;
  if (doc.contains("christoffel")) {
    for (const auto& [key, value] : doc["christoffel"].items()) {
      const auto idx = parse_key(key, m);
      const auto [i, j, k] = idx;
      const std::string text = value.is_string() ? value.get<std::string>() : value.dump();
      ScalarExpr e = parse_scalar(text, coords);
      const AffineManifold::Index3 mirror{j, i, k};
      if (auto it = symbols.find(mirror); it != symbols.end() && mirror != idx) {
        if (!holds(is_identically_zero(it->second - e))) {
          throw InvalidManifold("asymmetric Christoffel entries '" + key + "' and '" + source[mirror] + "'");
        }
      }
      symbols[idx] = e;
      source[idx] = key;
    }
  }
  std::vector<ScalarExpr> gamma(m * m * m, ScalarExpr::constant(m, 0));
  for (const auto& [idx, value] : symbols) {
    const auto [i, j, k] = idx;
    gamma[(i * m + j) * m + k] = value;
    gamma[(j * m + i) * m + k] = value;
  }
  std::vector<ScalarExpr> excluded;
  if (doc.contains("excluded")) {
    for (const auto& e : doc["excluded"]) excluded.push_back(parse_scalar(e.get<std::string>(), coords));
  }
  return AffineManifold(std::move(coords), std::move(gamma), std::move(excluded));
}

AffineManifold load_manifold_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidManifold("cannot open manifold file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_manifold(buffer.str());
}

std::string manifold_to_json(const AffineManifold& m) {
  nlohmann::ordered_json doc;
  doc["dim"] = m.dim();
  doc["coords"] = m.coords();
  nlohmann::ordered_json symbols = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = i; j < m.dim(); ++j) {
      for (std::size_t k = 0; k < m.dim(); ++k) {
        const auto& g = m.christoffel(i, j, k);
        if (g.is_zero_literal()) continue;
        symbols[std::to_string(i + 1) + "," + std::to_string(j + 1) + "^" + std::to_string(k + 1)] =
            g.to_string(m.coords());
      }
    }
  }
  doc["christoffel"] = symbols;
  nlohmann::ordered_json excluded = nlohmann::ordered_json::array();
  for (const auto& e : m.excluded()) excluded.push_back(e.to_string(m.coords()));
  doc["excluded"] = excluded;
  return doc.dump(2);
}

}  // namespace aqe
