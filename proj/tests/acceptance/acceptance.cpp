// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aqe/catalog/catalog.hpp"
#include "aqe/error.hpp"
#include "aqe/extension/riemannian_extension.hpp"
#include "aqe/geometry/curvature.hpp"
#include "aqe/projective/projective.hpp"
#include "aqe/solver/jet_system.hpp"
#include "test_support.hpp"

using namespace aqe;
using namespace aqe::catalog;
using aqe::test::expr;
using aqe::test::q;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what;
      pass = false;
    }
  }
};

const std::vector<Rational> kOrigin2{0, 0};
const std::vector<Rational> kOrigin3{0, 0, 0};

std::vector<double> to_double(const std::vector<Rational>& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.get_d());
  return out;
}

std::vector<FloatPoint> unit_square(const FloatPoint& p, std::size_t a, std::size_t b) {
  std::vector<FloatPoint> loop{p, p, p, p, p};
  loop[1][a] += 1;
  loop[2][a] += 1;
  loop[2][b] += 1;
  loop[3][b] += 1;
  return loop;
}

ModelSpec b2(Rational x, Rational y, Rational z, Rational w) {
  return {Family::kExampleB2, "", 1, {{"x", x}, {"y", y}, {"z", z}, {"w", w}}};
}

void c1(Outcome& o) {
  const auto m = build_model({Family::kExampleB1, "", 1, {}});
  const auto d = [&](const Rational& mu) { return solution_dimension(m, mu, kOrigin3).dim; };
  o.require(d(q(-3, 5)) == 2, "mu=-3/5");
  o.require(d(q(0)) == 1, "mu=0");
  for (const auto& mu : {q(-1), q(-1, 2), q(1), q(3, 5), q(2)}) o.require(d(mu) == 0, "mu=" + to_string(mu));
  o.detail << "dims 2, 1, 0 x5";
}

void c2(Outcome& o) {
  const Rational mu(-1, 2);
  const auto d = [&](const ModelSpec& s) { return solution_dimension(build_model(s), mu, kOrigin3).dim; };
  o.require(d(b2(q(1), q(0), q(0), q(0))) == 0, "(1,0,0,0)");
  o.require(d(b2(q(1), q(0), q(2), q(1, 4))) == 1, "(1,0,2,1/4)");
  o.require(d(b2(q(1), q(0), q(1), q(0))) == 2, "(1,0,1,0)");
  o.require(d(b2(q(0), q(5), q(7), q(-2))) == 4, "(0,5,7,-2)");
  const auto grid = example_b2_grid();
  const std::vector<Rational> mus{mu};
  const auto report = sweep(grid, mus);
  std::set<std::size_t> dims;
  for (const auto& row : report.rows) {
    o.require(row.error.empty(), row.spec.describe() + ": " + row.error);
    o.require(row.dim != 3, row.spec.describe() + " gave 3");
    dims.insert(row.dim);
  }
  o.require(report.ok(), "grid sweep violations");
  o.detail << "table 0,1,2,4; grid of " << grid.size() << " cells, dims {";
  for (auto it = dims.begin(); it != dims.end(); ++it) o.detail << (it == dims.begin() ? "" : ",") << *it;
  o.detail << "}";
}

void c3(Outcome& o) {
  const auto flat = AffineManifold::flat(2);
  const std::vector<std::string> xy{"x1", "x2"};
  const auto deformed = deform(flat, ProjectiveChange::from_form({expr("x2", xy), expr("0", xy)}));
  const auto a = solution_dimension(flat, q(-1), kOrigin2).dim;
  const auto b = solution_dimension(deformed, q(-1), kOrigin2).dim;
  o.require(a == 3, "flat");
  o.require(b == 0, "deformed");
  o.detail << "flat " << a << ", deformed " << b;
}

void c4(Outcome& o) {
  Sampler s(1004);
  for (int i = 0; i < 20; ++i) {
    const auto spec = random_type_a(s);
    const auto m = build_model(spec);
    o.require(ricci(m).rho.is_zero() == Verdict::kNonzero, spec.describe() + " is flat");
    o.require(solution_dimension(m, q(-1), kOrigin2).dim == 3, spec.describe());
  }
  o.detail << "20 surfaces, dim 3";
}

// Alternates generic draws with draws from the two rank-one normal forms, so both sides of
// the dichotomy are exercised.
ModelSpec seeded_type_a(Sampler& s, int i) {
  if (i % 2 == 0) return random_type_a(s);
  for (;;) {
    ModelSpec spec{i % 4 == 1 ? Family::kExampleEA2 : Family::kExampleEA3, "", 1,
                   {{"1,1^2", test::small_rational(s)}, {"1,2^2", test::small_rational(s)}, {"2,2^2", test::small_rational(s)}}};
    if (ricci(build_model(spec)).rho.is_zero() == Verdict::kNonzero) return spec;
  }
}

void c5(Outcome& o) {
  Sampler s(1005);
  int rank1 = 0;
  for (int i = 0; i < 20; ++i) {
    const auto spec = seeded_type_a(s, i);
    const auto m = build_model(spec);
    const auto rank = rank_at(ricci(m).rho, kOrigin2);
    if (rank == 1) ++rank1;
    for (const auto& mu : {q(1, 2), q(2)}) {
      const auto dim = solution_dimension(m, mu, kOrigin2).dim;
      o.require((dim == 2) == (rank == 1) && (dim == 0) == (rank == 2), spec.describe() + " mu=" + to_string(mu));
    }
  }
  o.require(rank1 > 0 && rank1 < 20, "both ranks represented");
  o.detail << "20 surfaces (" << rank1 << " of rank 1)";
}

void c6(Outcome& o) {
  Sampler s(7);
  std::vector<ModelSpec> models;
  for (int i = 0; i < 500; ++i) models.push_back(random_type_b(s));
  const std::vector<Rational> mus{q(-1)};
  const auto report = sweep(models, mus);
  std::map<std::size_t, int> hist;
  for (const auto& row : report.rows) {
    o.require(row.error.empty(), row.spec.describe() + ": " + row.error);
    o.require(row.dim == 0 || row.dim == 1 || row.dim == 3, row.spec.describe());
    ++hist[row.dim];
  }
  o.require(report.ok(), "sweep violations");
  const auto one = crosscheck({Family::kTC2, "1a", 1, {{"1,1^1", q(0)}, {"1,1^2", q(0)}, {"1,2^1", q(1)}, {"1,2^2", q(0)}}},
                              q(-1), test::point({1, 0}));
  const auto three = crosscheck({Family::kTC2, "2b", 1, {{"1,2^2", q(1)}}}, q(-1), test::point({1, 0}));
  o.require(one.computed == 1 && one.agree(), "representative of dim 1");
  o.require(three.computed == 3 && three.agree(), "representative of dim 3");
  o.require(hist[0] > 0, "no zero-dimensional surface");
  o.detail << "500 surfaces:";
  for (const auto& [d, c] : hist) o.detail << " dim" << d << "x" << c;
  o.detail << "; representatives " << one.computed << ", " << three.computed;
}

void c7(Outcome& o) {
  const ModelSpec a{Family::kTC3, "2a", 1, {{"1,2^2", q(1)}}};
  const auto m = build_model(a);
  const auto p = test::point({1, 0});
  o.require(solution_dimension(m, q(1, 2), p).dim == 2, "mu=1/2");
  for (const auto& mu : {q(1, 3), q(1), q(2)}) o.require(solution_dimension(m, mu, p).dim == 0, "mu=" + to_string(mu));
  Sampler s(1007);
  for (int i = 0; i < 5; ++i) {
    const auto spec = random_tc3_family1(s);
    const auto mu = tc3_eigenvalue(spec);
    o.require(mu.has_value(), spec.describe() + " has no eigenvalue");
    if (!mu) continue;
    const auto at = crosscheck(spec, *mu, p);
    o.require(at.computed >= 1 && at.agree(), spec.describe() + " at its eigenvalue");
    const auto off = crosscheck(spec, *mu + q(1, 3), p);
    o.require(off.computed == 0, spec.describe() + " off its eigenvalue");
  }
  o.detail << "(2a) 2/0/0/0; 5 draws of family (1) agree";
}

void c8(Outcome& o) {
  Sampler s(1008);
  for (int i = 0; i < 50; ++i) {
    const auto spec = random_type_a(s);
    const auto m = build_model(spec);
    const auto g = test::random_polynomial(s, 2, 2);
    o.require(ricci_transform_residual(m, g).is_zero() == Verdict::kZero, spec.describe());
  }
  o.detail << "50 pairs certified zero";
}

void c9(Outcome& o) {
  Sampler s(1009);
  for (int i = 0; i < 30; ++i) {
    const auto spec = i % 2 == 0 ? random_type_a(s) : random_type_b(s);
    const auto m = build_model(spec);
    const auto g = test::random_polynomial(s, 2, 2);
    const auto d = deform(m, g);
    const auto p = default_basepoint(m);
    const auto before = solution_dimension(m, q(-1), p).dim;
    const auto after = solution_dimension(d, q(-1), p).dim;
    o.require(before == after, spec.describe() + " dim");
    o.require((ricci(m).antisymmetric - ricci(d).antisymmetric).is_zero() == Verdict::kZero, spec.describe() + " rho_a");
  }
  o.detail << "30 pairs";
}

void c10(Outcome& o) {
  const auto m = build_model({Family::kTC2, "2b", 1, {{"1,2^2", q(1)}}});
  const auto p = test::point({1, 0});
  const FloatPoint pf{1, 0};
  const double radius = default_chart_radius(m, pf);
  const auto chart = flat_chart(m, p, square_grid(pf, radius, 2), radius);
  const std::size_t centre = chart.points.size() / 2;
  const auto& z = chart.z[centre];
  const auto& j = chart.jacobian[centre];
  const double z_err = std::abs(z[0]) + std::abs(z[1]);
  const double j_err = std::max({std::abs(j[0] - 1), std::abs(j[1]), std::abs(j[2]), std::abs(j[3] - 1)});
  const double dev = geodesic_straightness(m, chart, 20, 1010);
  o.require(z_err < 1e-9, "z(P)");
  o.require(j_err < 1e-9, "dz(P)");
  o.require(dev < 1e-6, "geodesic deviation");
  o.detail << "|z(P)| " << z_err << ", |dz(P)-id| " << j_err << ", deviation " << dev;
}

void c11(Outcome& o) {
  const auto m = build_model({Family::kExampleB1, "", 1, {}});
  Sampler s(1011);
  for (int i = 0; i < 3; ++i) {
    std::vector<ScalarExpr> phi(9);
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = a; b < 3; ++b) phi[a * 3 + b] = phi[b * 3 + a] = test::random_polynomial(s, 3, 2);
    }
    const auto r = extension_identities_residuals(m, phi, expr("x1*x3", m));
    o.require(r.hessian_defect.is_zero() == Verdict::kZero, "Hessian pullback");
    o.require(r.ricci_defect.is_zero() == Verdict::kZero, "Ricci pullback");
    o.require(is_identically_zero(r.null_gradient) == Verdict::kZero, "null gradient");
  }
  const auto g = deformed_extension(m);
  const auto [psi, mu] = quasi_einstein_potential(expr("exp(3*x3)", m), q(-3, 5));
  const auto residual = quasi_einstein_residual(g, psi.lifted(6), mu);
  std::vector<FloatPoint> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(s.random_float_point(6, -1, 1));
  const double worst = residual.max_abs(pts);
  o.require(worst < 1e-8, "quasi-Einstein residual");
  o.detail << "3 Phi exact; quasi-Einstein residual " << worst;
}

void c12(Outcome& o) {
  struct Case {
    const char* name;
    AffineManifold m;
    Rational mu;
    std::vector<Rational> p;
  };
  const std::vector<Case> cases{
      {"exampleB1", build_model({Family::kExampleB1, "", 1, {}}), q(-3, 5), kOrigin3},
      {"tc2:1a", build_model({Family::kTC2, "1a", 1, {{"1,1^1", q(0)}, {"1,1^2", q(0)}, {"1,2^1", q(1)}, {"1,2^2", q(0)}}}),
       q(-1), test::point({1, 0})},
      {"tc2:2b", build_model({Family::kTC2, "2b", 1, {{"1,2^2", q(1)}}}), q(-1), test::point({1, 0})},
  };
  double worst = 0;
  int loops = 0;
  for (const auto& c : cases) {
    const auto space = solution_dimension(c.m, c.mu, c.p);
    o.require(space.dim > 0, std::string(c.name) + " has no solutions");
    const auto p = to_double(c.p);
    for (const auto& jet : space.basis) {
      for (std::size_t a = 0; a < p.size(); ++a) {
        for (std::size_t b = 0; b < p.size(); ++b) {
          if (a == b) continue;
          const double d = holonomy_defect(c.m, c.mu, unit_square(p, a, b), to_double(jet));
          worst = std::max(worst, d);
          o.require(d < 1e-7, c.name);
          ++loops;
        }
      }
    }
  }
  o.detail << loops << " loops, worst defect " << worst;
}

void c13(Outcome& o) {
  const ModelSpec spec{Family::kExampleEA2, "", 1, {{"1,1^2", q(0)}, {"1,2^2", q(1, 2)}, {"2,2^2", q(0)}}};
  const auto m = build_model(spec);
  const auto alpha = alpha_invariant(m);
  o.require(alpha.rational_only() && alpha.rational().is_constant() && alpha.rational().constant_value() == 16,
            "alpha = 16");
  o.require(alpha_closed_form(spec) == 16, "closed form");
  const auto deformed = alpha_invariant(deform(m, expr("-log(1 + exp(x1))", m)));
  Sampler s(1013);
  double worst = 0;
  for (int i = 0; i < 5; ++i) {
    const auto p = s.random_float_point(2, -1.5, 1.5);
    const double e = std::exp(p[0]);
    const double ratio = deformed.evaluate(p) / 16;
    worst = std::max(worst, std::abs(ratio - (1 - e) * (1 - e) / ((1 + e) * (1 + e))));
  }
  o.require(worst < 1e-8, "deformation ratio");
  o.detail << "alpha 16; ratio error " << worst;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"1 three-dimensional fixture dimensions", c1},
      {"2 four-parameter family table", c2},
      {"3 flat plane and its deformation", c3},
      {"4 Type A distinguished eigenvalue", c4},
      {"5 Type A rank dichotomy", c5},
      {"6 Type B surfaces never dim 2", c6},
      {"7 Type B eigenvalue families", c7},
      {"8 Ricci transform identity", c8},
      {"9 strong deformation invariance", c9},
      {"10 flat chart and geodesics", c10},
      {"11 extension identities", c11},
      {"12 holonomy soundness", c12},
      {"13 alpha invariant", c13},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str(), secs);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
