#include <benchmark/benchmark.h>

#include <vector>

#include "aqe/catalog/catalog.hpp"
#include "aqe/expr/parser.hpp"
#include "aqe/extension/riemannian_extension.hpp"
#include "aqe/geometry/curvature.hpp"
#include "aqe/solver/jet_system.hpp"

namespace {

using namespace aqe;

const AffineManifold& fixture() {
  static const AffineManifold m = catalog::build_model({catalog::Family::kExampleB1, "", 1, {}});
  return m;
}

void BM_Differentiate(benchmark::State& state) {
  const std::vector<std::string> names{"x1", "x2", "x3"};
  const auto e = parse_scalar("(x1^3 - 2*x2*x3 + 5)/(x1 + x2^2 + 1) * exp(3*x3)", names);
  for (auto _ : state) {
    for (std::size_t i = 0; i < 3; ++i) benchmark::DoNotOptimize(e.differentiate(i).differentiate(i));
  }
}
BENCHMARK(BM_Differentiate);

void BM_ZeroTestRational(benchmark::State& state) {
  const std::vector<std::string> names{"x1", "x2"};
  const auto e = parse_scalar("(x1 + x2)^6 - (x1^2 + 2*x1*x2 + x2^2)^3", names);
  for (auto _ : state) benchmark::DoNotOptimize(is_identically_zero(e));
}
BENCHMARK(BM_ZeroTestRational);

void BM_Ricci(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ricci(fixture()));
}
BENCHMARK(BM_Ricci);

void BM_SolveFixture(benchmark::State& state) {
  const std::vector<Rational> origin{0, 0, 0};
  for (auto _ : state) benchmark::DoNotOptimize(solution_dimension(fixture(), Rational(-3, 5), origin).dim);
}
BENCHMARK(BM_SolveFixture);

void BM_SolveTypeB(benchmark::State& state) {
  Sampler s(7);
  std::vector<AffineManifold> models;
  for (int i = 0; i < 32; ++i) models.push_back(catalog::build_model(catalog::random_type_b(s)));
  const std::vector<Rational> p{1, 0};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solution_dimension(models[i++ % models.size()], Rational(-1), p).dim);
  }
}
BENCHMARK(BM_SolveTypeB);

void BM_TransportLoop(benchmark::State& state) {
  const std::vector<FloatPoint> loop{{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}, {0, 0, 0}};
  const std::vector<double> jet{1, 0, 0, 3};
  const JetTransport transport(fixture(), Rational(-3, 5), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(transport.holonomy_defect(loop, jet));
}
BENCHMARK(BM_TransportLoop)->Arg(250)->Arg(1000);

void BM_ExtensionRicci(benchmark::State& state) {
  const auto g = deformed_extension(fixture());
  for (auto _ : state) benchmark::DoNotOptimize(ricci(levi_civita(g)));
}
BENCHMARK(BM_ExtensionRicci);

}  // namespace

BENCHMARK_MAIN();
