#include <doctest.h>

#include <cmath>
#include <vector>

#include "aqe/catalog/catalog.hpp"
#include "aqe/error.hpp"
#include "aqe/geometry/curvature.hpp"
#include "aqe/projective/projective.hpp"
#include "aqe/solver/jet_system.hpp"
#include "test_support.hpp"

using namespace aqe;
using aqe::test::expr;
using aqe::test::q;

namespace {

AffineManifold example_b1() { return load_manifold_file(test::data_file("example_b1.json")); }

const std::vector<Rational> kOrigin3{0, 0, 0};
const std::vector<Rational> kOrigin2{0, 0};

std::vector<FloatPoint> unit_square(const FloatPoint& p, std::size_t a, std::size_t b) {
  std::vector<FloatPoint> loop{p, p, p, p, p};
  loop[1][a] += 1;
  loop[2][a] += 1;
  loop[2][b] += 1;
  loop[3][b] += 1;
  return loop;
}

std::vector<double> to_double(const std::vector<Rational>& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.get_d());
  return out;
}

// Jet (f, df) of an expression at an exact point, in floating point.
std::vector<double> jet_of(const ScalarExpr& f, const std::vector<Rational>& p) {
  std::vector<double> out{f.evaluate_float(p)};
  for (std::size_t i = 0; i < p.size(); ++i) out.push_back(f.differentiate(i).evaluate_float(p));
  return out;
}

// True when the jet lies in the span of the solution basis (float least squares residual).
bool in_span(const SolutionSpace& space, const std::vector<double>& jet) {
  if (space.float_basis.empty()) {
    for (double v : jet) {
      if (std::abs(v) > 1e-9) return false;
    }
    return true;
  }
  // Gram-Schmidt projection onto the basis.
  std::vector<std::vector<double>> q;
  for (const auto& b : space.float_basis) {
    auto v = b;
    for (const auto& e : q) {
      double d = 0;
      for (std::size_t i = 0; i < v.size(); ++i) d += v[i] * e[i];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * e[i];
    }
    double n = 0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    if (n < 1e-12) continue;
    for (double& x : v) x /= n;
    q.push_back(v);
  }
  auto r = jet;
  for (const auto& e : q) {
    double d = 0;
    for (std::size_t i = 0; i < r.size(); ++i) d += r[i] * e[i];
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= d * e[i];
  }
  double n = 0;
  double scale = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    n = std::max(n, std::abs(r[i]));
    scale = std::max(scale, std::abs(jet[i]));
  }
  return n <= 1e-9 * std::max(1.0, scale);
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("jet system of flat space has only the unit entries") {
  const auto js = build_jet_system(AffineManifold::flat(2), q(7));
  CHECK(js.mu_m == q(-1));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < 3; ++c) {
        const bool unit = r == 0 && c == i + 1;
        CHECK(is_identically_zero(js.entry(i, r, c) - ScalarExpr::constant(2, unit ? 1 : 0)) == Verdict::kZero);
      }
    }
  }
  CHECK(integrability_constraints(js).rows.size() == 0);
}

TEST_CASE("jet system of the three-dimensional fixture") {
  const auto m = example_b1();
  const auto js = build_jet_system(m, q(-3, 5));
  CHECK(js.mu_m == q(-1, 2));
  const auto rho_s = ricci(m).symmetric;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(is_identically_zero(js.entry(i, j + 1, 0) - rho_s(i, j).scaled(q(-3, 5))) == Verdict::kZero);
      for (std::size_t k = 0; k < 3; ++k) {
        CHECK(is_identically_zero(js.entry(i, j + 1, k + 1) - m.christoffel(i, j, k)) == Verdict::kZero);
      }
    }
  }
}

TEST_CASE("Type B jet entries scale like 1/x1") {
  const auto m = load_manifold_file(test::data_file("tc2_2b.json"));
  const auto js = build_jet_system(m, q(1, 2));
  const auto x1 = expr("x1", m);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t r = 1; r < 3; ++r) {
      for (std::size_t c = 1; c < 3; ++c) CHECK((js.entry(i, r, c) * x1).rational().is_constant());
    }
  }
}

TEST_CASE("constraint stacks") {
  const auto deformed = deform(AffineManifold::flat(2), ProjectiveChange::from_form({expr("x2", {"x1", "x2"}),
                                                                                    expr("0", {"x1", "x2"})}));
  const auto stack = integrability_constraints(build_jet_system(deformed, q(-1)));
  CHECK_FALSE(stack.rows.empty());
  const auto b1 = integrability_constraints(build_jet_system(example_b1(), q(1)));
  CHECK_FALSE(b1.rows.empty());
  const auto js = build_jet_system(AffineManifold::flat(2), q(3));
  CHECK(prolong(js, ConstraintStack{}).rows.empty());
  ConstraintStack constant;
  constant.rows.push_back({{ScalarExpr::constant(2, 0), ScalarExpr::constant(2, 1), ScalarExpr::constant(2, 0)}, 0});
  const auto next = prolong(js, constant);
  for (const auto& row : next.rows) {
    if (row.generation == 0) continue;
    for (const auto& c : row.c) {
      if (!c.is_zero_literal()) CHECK(is_identically_zero(c) == Verdict::kZero);
    }
  }
}

TEST_CASE("three-dimensional fixture dimensions at the origin") {
  const auto m = example_b1();
  const auto d = [&](Rational mu) { return solution_dimension(m, mu, kOrigin3).dim; };
  CHECK(d(q(-3, 5)) == 2);
  CHECK(d(q(0)) == 1);
  for (const auto& mu : {q(-1), q(-1, 2), q(1), q(3, 5), q(2)}) CHECK(d(mu) == 0);
  const auto space = solution_dimension(m, q(-3, 5), kOrigin3);
  CHECK(space.stabilized);
  CHECK_FALSE(space.numeric);
  CHECK(in_span(space, jet_of(expr("exp(3*x3)", m), kOrigin3)));
  CHECK(in_span(space, jet_of(expr("x1*exp(3*x3)", m), kOrigin3)));
  CHECK_FALSE(in_span(space, jet_of(expr("x2*exp(3*x3)", m), kOrigin3)));
  const auto yamabe = solution_dimension(m, q(0), kOrigin3);
  CHECK(in_span(yamabe, jet_of(expr("1", m), kOrigin3)));
}

TEST_CASE("flat space has the full jet space") {
  const auto space = solution_dimension(AffineManifold::flat(2), q(7), kOrigin2);
  CHECK(space.dim == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(space.basis[i][j] == q(i == j ? 1 : 0));
  }
}

TEST_CASE("deformed flat plane has no solutions at the distinguished eigenvalue") {
  const std::vector<std::string> names{"x1", "x2"};
  const auto deformed =
      deform(AffineManifold::flat(2), ProjectiveChange::from_form({expr("x2", names), expr("0", names)}));
  CHECK(solution_dimension(AffineManifold::flat(2), q(-1), kOrigin2).dim == 3);
  CHECK(solution_dimension(deformed, q(-1), kOrigin2).dim == 0);
}

TEST_CASE("four-parameter family attains dimension four") {
  catalog::ModelSpec spec{catalog::Family::kExampleB2, "", 1, {{"x", q(0)}, {"y", q(1)}, {"z", q(2)}, {"w", q(3)}}};
  CHECK(solution_dimension(catalog::build_model(spec), q(-1, 2), kOrigin3).dim == 4);
}

TEST_CASE("solver rejects basepoints on the excluded locus") {
  const auto m = load_manifold_file(test::data_file("tc2_2b.json"));
  CHECK_THROWS_AS(solution_dimension(m, q(-1), test::point({0, 1})), DomainError);
  CHECK(default_basepoint(m) == test::point({1, 0}));
  CHECK(default_basepoint(example_b1()) == kOrigin3);
}

TEST_CASE("report JSON") {
  const auto space = solution_dimension(example_b1(), q(-3, 5), kOrigin3);
  const auto text = solution_report_json(space);
  CHECK(text.find("\"mu\": \"-3/5\"") != std::string::npos);
  CHECK(text.find("\"dim\": 2") != std::string::npos);
  CHECK(text.find("\"stabilized\": true") != std::string::npos);
  CHECK(text == solution_report_json(solution_dimension(example_b1(), q(-3, 5), kOrigin3)));
}

TEST_CASE("numeric mode for exp coefficients") {
  // Strong deformation of a constant-coefficient surface by an exp potential keeps dim E(mu_m).
  Sampler s(51);
  const auto m = catalog::build_model(catalog::random_type_a(s));
  const auto deformed = deform(m, expr("exp(x1)/3", m));
  const auto space = solution_dimension(deformed, q(-1), kOrigin2);
  CHECK(space.numeric);
  CHECK(space.dim == 3);
}

TEST_CASE("transport examples") {
  const auto flat = AffineManifold::flat(2);
  const std::vector<FloatPoint> path{{0, 0}, {0.7, -1.3}};
  const auto u = transport_jet(flat, q(2), path, std::vector<double>{0, 1, 0});
  CHECK(u[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(u[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(u[2]) < 1e-12);
  const std::vector<FloatPoint> bent{{0, 0}, {1, 0}, {1, 2}, {-1, 3}};
  const auto one = transport_jet(flat, q(5), bent, std::vector<double>{1, 0, 0});
  CHECK(one[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(one[1]) + std::abs(one[2]) < 1e-12);

  const auto b1 = example_b1();
  const auto jet = jet_of(expr("exp(3*x3)", b1), kOrigin3);
  const std::vector<FloatPoint> up{{0, 0, 0}, {0, 0, 0.5}};
  const auto v = transport_jet(b1, q(-3, 5), up, jet);
  CHECK(std::abs(v[0] - std::exp(1.5)) / std::exp(1.5) < 1e-8);
}

TEST_CASE("transport refuses to cross the excluded locus") {
  const auto m = load_manifold_file(test::data_file("tc2_2b.json"));
  const std::vector<FloatPoint> crossing{{1, 0}, {-1, 0}};
  CHECK_THROWS_AS(transport_jet(m, q(-1), crossing, std::vector<double>{1, 0, 0}), DomainError);
}

TEST_CASE("holonomy") {
  const auto flat = AffineManifold::flat(2);
  CHECK(holonomy_defect(flat, q(3), unit_square({0, 0}, 0, 1), std::vector<double>{0.3, -1, 2}) < 1e-10);

  const auto b1 = example_b1();
  const auto space = solution_dimension(b1, q(-3, 5), kOrigin3);
  for (const auto& jet : space.basis) {
    CHECK(holonomy_defect(b1, q(-3, 5), unit_square({0, 0, 0}, 0, 2), to_double(jet)) < 1e-8);
  }
  // A jet outside the kernel picks up a defect on some loop.
  double worst = 0;
  const std::vector<double> bad{1, 0, 1, 0};
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      if (a != b) worst = std::max(worst, holonomy_defect(b1, q(-3, 5), unit_square({0, 0, 0}, a, b), bad));
    }
  }
  CHECK(worst > 1e-4);
  CHECK_THROWS_AS(holonomy_defect(flat, q(1), std::vector<FloatPoint>{{0, 0}, {1, 0}}, std::vector<double>{1, 0, 0}),
                  PreconditionError);
}

TEST_CASE("property: dimension bound and monotone ranks") {
  Sampler s(61);
  int cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    AffineManifold m = AffineManifold::flat(2);
    switch (trial % 4) {
      case 0: m = catalog::build_model(catalog::random_type_a(s)); break;
      case 1: m = catalog::build_model(catalog::random_type_b(s)); break;
      default: {
        // Constant-coefficient three-manifold.
        std::vector<ScalarExpr> g(27, ScalarExpr::constant(3, 0));
        for (std::size_t i = 0; i < 3; ++i) {
          for (std::size_t j = i; j < 3; ++j) {
            for (std::size_t k = 0; k < 3; ++k) {
              if (s.next() % 3 != 0) continue;
              g[(i * 3 + j) * 3 + k] = g[(j * 3 + i) * 3 + k] = ScalarExpr::constant(3, test::small_rational(s));
            }
          }
        }
        m = AffineManifold({"x1", "x2", "x3"}, g);
      }
    }
    const Rational mu = test::small_rational(s);
    const auto space = solution_dimension(m, mu, default_basepoint(m));
    CHECK(space.dim <= m.dim() + 1);
    CHECK(space.basis.size() == space.dim);
    for (std::size_t i = 1; i < space.rank_history.size(); ++i) {
      CHECK(space.rank_history[i - 1] <= space.rank_history[i]);
    }
    CHECK(space.dim + space.rank_history.back() == m.dim() + 1);
    ++cases;
  }
  CHECK(cases == 200);
}

TEST_CASE("property: kernel soundness on random short loops") {
  Sampler s(62);
  struct Case {
    AffineManifold m;
    Rational mu;
    std::vector<Rational> p;
  };
  const std::vector<Case> cases{
      {example_b1(), q(-3, 5), kOrigin3},
      {example_b1(), q(0), kOrigin3},
      {load_manifold_file(test::data_file("tc2_2b.json")), q(-1), test::point({1, 0})},
      {load_manifold_file(test::data_file("tc2_1a.json")), q(-1), test::point({1, 0})},
  };
  for (const auto& c : cases) {
    const auto space = solution_dimension(c.m, c.mu, c.p);
    REQUIRE(space.dim > 0);
    const auto p = to_double(c.p);
    for (const auto& jet : space.basis) {
      for (int loop_index = 0; loop_index < 5; ++loop_index) {
        std::vector<FloatPoint> loop{p};
        for (int k = 0; k < 3; ++k) {
          auto v = p;
          for (auto& x : v) x += s.uniform(-0.3, 0.3);
          loop.push_back(v);
        }
        loop.push_back(p);
        CHECK(holonomy_defect(c.m, c.mu, loop, to_double(jet)) < 1e-7);
      }
    }
  }
}

TEST_CASE("property: dimension does not depend on the generic basepoint") {
  Sampler s(63);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = trial % 2 == 0 ? catalog::random_type_a(s) : catalog::random_type_b(s);
    const auto m = catalog::build_model(spec);
    for (const auto& mu : {q(-1), q(0), q(1, 2)}) {
      const auto a = solution_dimension(m, mu, test::point({1, 0})).dim;
      const auto b = solution_dimension(m, mu, std::vector<Rational>{q(5, 2), q(-7, 3)}).dim;
      CHECK(a == b);
    }
  }
}

TEST_CASE("property: closed-form spans lie in the computed kernel") {
  // Type A surface with first row (1, 0, 0): E(0) contains 1 and exp(x1).
  catalog::ModelSpec spec{catalog::Family::kExampleEA2, "", 1, {{"1,1^2", q(2)}, {"1,2^2", q(1, 3)}, {"2,2^2", q(-1)}}};
  const auto a = catalog::build_model(spec);
  const auto ea = solution_dimension(a, q(0), kOrigin2);
  CHECK(ea.dim == 2);
  CHECK(in_span(ea, jet_of(expr("1", a), kOrigin2)));
  CHECK(in_span(ea, jet_of(expr("exp(x1)", a), kOrigin2)));
  // Type B with (C_11^1, C_12^1, C_22^1) = (-1, 0, 0): E(0) = span{1, log x1}.
  const auto b = load_manifold(
      R"({"dim": 2, "christoffel": {"1,1^1": "-1/x1", "1,1^2": "1/x1", "1,2^2": "2/x1", "2,2^2": "1/x1"}, "excluded": ["x1"]})");
  const auto p = test::point({1, 0});
  const auto eb = solution_dimension(b, q(0), p);
  CHECK(eb.dim == 2);
  CHECK(in_span(eb, jet_of(expr("log(x1)", b), p)));
  // Three-dimensional fixture at mu = -3/5.
  const auto b1 = example_b1();
  const auto e1 = solution_dimension(b1, q(-3, 5), kOrigin3);
  CHECK(in_span(e1, jet_of(expr("(x1 + 4)*exp(3*x3)", b1), kOrigin3)));
}

}
