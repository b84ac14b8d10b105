#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "aqe/catalog/catalog.hpp"
#include "aqe/error.hpp"
#include "aqe/geometry/affine_manifold.hpp"
#include "aqe/geometry/curvature.hpp"
#include "aqe/projective/projective.hpp"
#include "test_support.hpp"

using namespace aqe;
using aqe::test::expr;
using aqe::test::q;

namespace {

AffineManifold example_b1() { return load_manifold_file(test::data_file("example_b1.json")); }

AffineManifold surface(const std::map<std::string, std::string>& symbols) {
  std::string doc = R"({"dim": 2, "coords": ["x1", "x2"], "christoffel": {)";
  bool first = true;
  for (const auto& [k, v] : symbols) {
    if (!first) doc += ",";
    doc += "\"" + k + "\": \"" + v + "\"";
    first = false;
  }
  return load_manifold(doc + "}}");
}

// Ricci tensor written out from the contracted curvature formula, independently of curvature().
TensorField ricci_by_formula(const AffineManifold& m) {
  const std::size_t n = m.dim();
  TensorField rho(n, 2);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      ScalarExpr s = ScalarExpr::constant(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        s += m.christoffel(j, k, i).differentiate(i) - m.christoffel(i, k, i).differentiate(j);
        for (std::size_t p = 0; p < n; ++p) {
          s += m.christoffel(i, p, i) * m.christoffel(j, k, p) - m.christoffel(j, p, i) * m.christoffel(i, k, p);
        }
      }
      rho(j, k) = s;
    }
  }
  return rho;
}

TensorField two_form(std::size_t n, const std::map<std::pair<std::size_t, std::size_t>, Rational>& entries) {
  TensorField t(n, 2);
  for (auto& c : t.components()) c = ScalarExpr::constant(n, 0);
  for (const auto& [ij, v] : entries) t(ij.first, ij.second) = ScalarExpr::constant(n, v);
  return t;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("load_manifold accepts valid documents") {
  const auto flat = load_manifold(R"({"dim": 2, "christoffel": {}})");
  CHECK(flat.dim() == 2);
  CHECK(flat.coords() == std::vector<std::string>{"x1", "x2"});
  const auto b1 = example_b1();
  CHECK(b1.dim() == 3);
  CHECK(b1.christoffel(0, 1, 2).evaluate(std::vector<Rational>{0, 0, 0}) == q(1));
  CHECK(b1.christoffel(1, 0, 2).evaluate(std::vector<Rational>{0, 0, 0}) == q(1));
  CHECK(b1.christoffel(2, 0, 0).evaluate(std::vector<Rational>{0, 0, 0}) == q(3));
  CHECK(b1.christoffel(2, 2, 2).evaluate(std::vector<Rational>{0, 0, 0}) == q(5));
  const auto tc = load_manifold_file(test::data_file("tc2_2b.json"));
  CHECK(tc.on_excluded_locus(std::vector<Rational>{q(0), q(3)}));
  CHECK_FALSE(tc.on_excluded_locus(std::vector<Rational>{q(1), q(0)}));
  CHECK(tc.on_excluded_locus(std::vector<double>{0.0, 1.0}));
}

TEST_CASE("load_manifold errors") {
  CHECK_THROWS_AS(load_manifold_file(test::data_file("asymmetric.json")), InvalidManifold);
  CHECK_THROWS_AS(load_manifold_file(test::data_file("no_such_file.json")), InvalidManifold);
  CHECK_THROWS_AS(load_manifold("{not json"), InvalidManifold);
  CHECK_THROWS_AS(load_manifold(R"({"christoffel": {}})"), InvalidManifold);
  CHECK_THROWS_AS(load_manifold(R"({"dim": 1})"), InvalidManifold);
  CHECK_THROWS_AS(load_manifold(R"({"dim": 2, "coords": ["x1"]})"), InvalidManifold);
  CHECK_THROWS_AS(load_manifold(R"({"dim": 2, "christoffel": {"1,3^1": "1"}})"), InvalidManifold);
  CHECK_THROWS_AS(load_manifold(R"({"dim": 2, "christoffel": {"12^1": "1"}})"), InvalidManifold);
  CHECK_THROWS_AS(load_manifold(R"({"dim": 2, "christoffel": {"1,2^1": "x1 +"}})"), ParseError);
  CHECK_THROWS_AS(load_manifold(R"({"dim": 2, "christoffel": {"1,2^1": "y"}})"), UnknownIdentifier);
}

TEST_CASE("manifold JSON round trip") {
  const auto b1 = example_b1();
  const auto again = load_manifold(manifold_to_json(b1));
  CHECK(manifold_to_json(again) == manifold_to_json(b1));
  const auto tc = load_manifold_file(test::data_file("tc2_2b.json"));
  const auto tc_again = load_manifold(manifold_to_json(tc));
  CHECK(tc_again.excluded().size() == 1);
  CHECK(manifold_to_json(tc_again) == manifold_to_json(tc));
}

TEST_CASE("curvature of flat space vanishes") {
  CHECK(curvature(AffineManifold::flat(3)).is_zero() == Verdict::kZero);
  CHECK(ricci(AffineManifold::flat(2)).rho.is_zero() == Verdict::kZero);
}

TEST_CASE("Ricci tensor of the three-dimensional fixture") {
  const auto parts = ricci(example_b1());
  const auto expected = two_form(3, {{{0, 1}, q(5)}, {{1, 0}, q(5)}, {{2, 2}, q(10)}});
  CHECK((parts.rho - expected).is_zero() == Verdict::kZero);
  CHECK(parts.antisymmetric.is_zero() == Verdict::kZero);
  CHECK(curvature(example_b1()).is_zero() == Verdict::kNonzero);
}

TEST_CASE("Type B curvature scales like the inverse square of x1") {
  const auto m = surface({{"1,1^1", "-1/x1"}, {"1,2^2", "1/x1"}});
  const auto r = curvature(m);
  CHECK(r.is_zero() == Verdict::kNonzero);
  const auto scale = expr("x1^2", m);
  for (const auto& c : r.components()) {
    const auto scaled = c * scale;
    CHECK(scaled.rational_only());
    CHECK(scaled.rational().is_constant());
  }
}

TEST_CASE("hessian examples") {
  const auto flat = AffineManifold::flat(2);
  const auto h = hessian(flat, expr("x1*x2", flat));
  CHECK((h - two_form(2, {{{0, 1}, q(1)}, {{1, 0}, q(1)}})).is_zero() == Verdict::kZero);
  CHECK(hessian(flat, expr("x1", flat)).is_zero() == Verdict::kZero);
  const auto m = surface({{"1,1^1", "1"}});
  CHECK((hessian(m, expr("x1", m)) - two_form(2, {{{0, 0}, q(-1)}})).is_zero() == Verdict::kZero);
}

TEST_CASE("covariant derivative of the Ricci tensor") {
  CHECK(nabla_ricci(AffineManifold::flat(2)).is_zero() == Verdict::kZero);
  catalog::ModelSpec spec{catalog::Family::kExampleEA3, "", 1, {{"1,1^2", q(1)}, {"1,2^2", q(1, 2)}, {"2,2^2", q(2)}}};
  const auto m = catalog::build_model(spec);
  CHECK(nabla_ricci(m).is_zero() == Verdict::kZero);
  const auto rho11 = ricci(m).rho(0, 0);
  const auto deformed = deform(m, expr("-log(x1)", m));
  const auto nr = nabla_ricci(deformed);
  TensorField expected(2, 3);
  for (auto& c : expected.components()) c = ScalarExpr::constant(2, 0);
  expected(0, 0, 0) = rho11 * expr("4/x1", m);
  CHECK((nr - expected).is_zero() == Verdict::kZero);
}

TEST_CASE("total symmetry") {
  CHECK(is_totally_symmetric(two_form(2, {{{0, 1}, q(1)}, {{1, 0}, q(1)}})) == Verdict::kZero);
  CHECK(is_totally_symmetric(two_form(2, {{{0, 1}, q(1)}, {{1, 0}, q(-1)}})) == Verdict::kNonzero);
  Sampler s(31);
  for (int i = 0; i < 10; ++i) {
    const auto m = catalog::build_model(catalog::random_type_a(s));
    CHECK(is_totally_symmetric(nabla_ricci(m)) == Verdict::kZero);
    CHECK(is_totally_symmetric(ricci(m).rho) == Verdict::kZero);
  }
}

TEST_CASE("quasi-Einstein operator examples") {
  const auto flat = AffineManifold::flat(2);
  CHECK(apply_qe_operator(flat, q(7), expr("1", flat)).is_zero() == Verdict::kZero);
  const auto a = surface({{"1,1^1", "1"}});
  CHECK(holds(apply_qe_operator(a, q(0), expr("exp(x1)", a)).is_zero()));
  const auto b = surface({{"1,1^1", "-1/x1"}, {"1,1^2", "1/x1"}, {"1,2^2", "2/x1"}, {"2,2^2", "1/x1"}});
  CHECK(holds(apply_qe_operator(b, q(0), expr("log(x1)", b)).is_zero()));
  CHECK(apply_qe_operator(b, q(0), expr("x2^2", b)).is_zero() == Verdict::kNonzero);
  const auto b1 = example_b1();
  CHECK(holds(apply_qe_operator(b1, q(-3, 5), expr("x1*exp(3*x3)", b1)).is_zero()));
  CHECK(apply_qe_operator(b1, q(-1, 2), expr("exp(3*x3)", b1)).is_zero() == Verdict::kNonzero);
}

TEST_CASE("affine Killing examples") {
  const auto flat = AffineManifold::flat(2);
  CHECK(is_affine_killing(flat, std::vector<ScalarExpr>{expr("1", flat), expr("0", flat)}) == Verdict::kZero);
  CHECK(is_affine_killing(flat, std::vector<ScalarExpr>{expr("0", flat), expr("x1", flat)}) == Verdict::kZero);
  CHECK(is_affine_killing(flat, std::vector<ScalarExpr>{expr("x1^2", flat), expr("0", flat)}) == Verdict::kNonzero);
}

TEST_CASE("rank at a point") {
  const auto parts = ricci(example_b1());
  CHECK(rank_at(parts.rho, std::vector<Rational>{0, 0, 0}) == 3);
  CHECK(rank_at(ricci(AffineManifold::flat(2)).rho, std::vector<Rational>{0, 0}) == 0);
}

TEST_CASE("property: contracted curvature matches the Ricci formula") {
  Sampler s(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = trial % 2 == 0 ? 2 : 3;
    const AffineManifold man = trial % 5 == 4 ? catalog::build_model(catalog::random_type_b(s))
                                              : test::random_polynomial_manifold(s, m);
    CHECK((ricci(man).rho - ricci_by_formula(man)).is_zero() == Verdict::kZero);
  }
}

TEST_CASE("property: Ricci splitting and the operator decomposition") {
  Sampler s(42);
  for (int trial = 0; trial < 30; ++trial) {
    const auto man = test::random_polynomial_manifold(s, 2 + trial % 2);
    const auto parts = ricci(man);
    CHECK((parts.symmetric + parts.antisymmetric - parts.rho).is_zero() == Verdict::kZero);
    const std::size_t n = man.dim();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(is_identically_zero(parts.symmetric(i, j) - parts.symmetric(j, i)) == Verdict::kZero);
        CHECK(is_identically_zero(parts.antisymmetric(i, j) + parts.antisymmetric(j, i)) == Verdict::kZero);
      }
    }
    const Rational mu = test::small_rational(s);
    const auto f = test::random_polynomial(s, n, 2);
    const auto lhs = apply_qe_operator(man, mu, f);
    const auto rhs = hessian(man, f) - parts.symmetric.scaled(f.scaled(mu));
    CHECK((lhs - rhs).is_zero() == Verdict::kZero);
    const auto h = hessian(man, f);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) CHECK(is_identically_zero(h(i, j) - h(j, i)) == Verdict::kZero);
    }
  }
}

TEST_CASE("property: Killing fields preserve solution spans") {
  // Constant-coefficient models: coordinate fields are affine Killing.
  const auto b1 = example_b1();
  const std::vector<ScalarExpr> d1{expr("1", b1), expr("0", b1), expr("0", b1)};
  const std::vector<ScalarExpr> d3{expr("0", b1), expr("0", b1), expr("1", b1)};
  CHECK(is_affine_killing(b1, d1) == Verdict::kZero);
  CHECK(is_affine_killing(b1, d3) == Verdict::kZero);
  for (const char* f : {"exp(3*x3)", "x1*exp(3*x3)", "(2*x1 - 5)*exp(3*x3)"}) {
    const auto fe = expr(f, b1);
    for (const auto& x : {d1, d3}) {
      ScalarExpr xf = ScalarExpr::constant(3, 0);
      for (std::size_t i = 0; i < 3; ++i) xf += x[i] * fe.differentiate(i);
      CHECK(holds(apply_qe_operator(b1, q(-3, 5), xf).is_zero()));
    }
  }
  // Type B: dilation and the x2 translation are affine Killing; E(0) = span{1, log x1}.
  const auto b = surface({{"1,1^1", "-1/x1"}, {"1,1^2", "1/x1"}, {"1,2^2", "2/x1"}, {"2,2^2", "1/x1"}});
  const std::vector<ScalarExpr> dil{expr("x1", b), expr("x2", b)};
  CHECK(is_affine_killing(b, dil) == Verdict::kZero);
  const auto f = expr("3*log(x1) + 2", b);
  const auto xf = dil[0] * f.differentiate(0) + dil[1] * f.differentiate(1);
  CHECK(apply_qe_operator(b, q(0), xf).is_zero() == Verdict::kZero);
  // Type A: E(0) = span{1, exp(x1)} and d/dx1 maps the span to itself.
  Sampler s(43);
  for (int i = 0; i < 5; ++i) {
    const auto m = catalog::build_model(catalog::random_type_a(s));
    const std::vector<ScalarExpr> dx{expr("1", m), expr("0", m)};
    const std::vector<ScalarExpr> dy{expr("0", m), expr("1", m)};
    CHECK(is_affine_killing(m, dx) == Verdict::kZero);
    CHECK(is_affine_killing(m, dy) == Verdict::kZero);
  }
}

}
