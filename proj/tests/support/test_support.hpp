#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aqe/expr/parser.hpp"
#include "aqe/expr/scalar_expr.hpp"
#include "aqe/expr/zero_test.hpp"
#include "aqe/geometry/affine_manifold.hpp"

namespace aqe::test {

inline std::string data_file(const std::string& name) { return std::string(AQE_TEST_DATA) + "/" + name; }

inline ScalarExpr expr(const std::string& text, const std::vector<std::string>& coords) {
  return parse_scalar(text, coords);
}

inline ScalarExpr expr(const std::string& text, const AffineManifold& m) { return parse_scalar(text, m.coords()); }

inline Rational q(long num, long den = 1) { return Rational(num, den); }

/// Small rational with numerator in [-3, 3] and denominator in [1, 3].
inline Rational small_rational(Sampler& s) {
  const long num = static_cast<long>(s.next() % 7) - 3;
  const long den = static_cast<long>(s.next() % 3) + 1;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Random polynomial of total degree <= degree with small rational coefficients.
inline ScalarExpr random_polynomial(Sampler& s, std::size_t nvars, unsigned degree) {
  ScalarExpr out = ScalarExpr::constant(nvars, 0);
  std::vector<ScalarExpr> x;
  for (std::size_t i = 0; i < nvars; ++i) x.push_back(ScalarExpr::coordinate(nvars, i));
  std::vector<ScalarExpr> monomials{ScalarExpr::constant(nvars, 1)};
  std::vector<ScalarExpr> frontier = monomials;
  for (unsigned d = 1; d <= degree; ++d) {
    std::vector<ScalarExpr> next;
    for (const auto& mono : frontier) {
      for (const auto& xi : x) next.push_back(mono * xi);
    }
    monomials.insert(monomials.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  for (const auto& mono : monomials) {
    if (s.next() % 2 == 0) out += mono.scaled(small_rational(s));
  }
  return out;
}

/// Manifold with random affine (degree <= 1) symmetric Christoffel symbols.
inline AffineManifold random_polynomial_manifold(Sampler& s, std::size_t m, unsigned degree = 1) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) names.push_back("x" + std::to_string(i + 1));
  std::vector<ScalarExpr> gamma(m * m * m, ScalarExpr::constant(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        const ScalarExpr g = random_polynomial(s, m, degree);
        gamma[(i * m + j) * m + k] = g;
        gamma[(j * m + i) * m + k] = g;
      }
    }
  }
  return AffineManifold(names, gamma);
}

inline std::vector<Rational> point(std::initializer_list<long> values) {
  std::vector<Rational> p;
  for (long v : values) p.emplace_back(v);
  return p;
}

}  // namespace aqe::test
