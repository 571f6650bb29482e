#include <benchmark/benchmark.h>

#include "geomopt/hoffman.hpp"
#include "geomopt/linalg.hpp"
#include "geomopt/projection.hpp"
#include "geomopt/random.hpp"
#include "geomopt/solver.hpp"

namespace {

using namespace geomopt;

Matrix gaussian(std::size_t n, std::size_t d, std::uint64_t seed) {
  return sample_ensemble(EnsembleSpec{EnsembleKind::gaussian, n, d, 0.0, seed});
}

void BM_SingularValues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = gaussian(n, 2 * n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(singular_values(a));
}
BENCHMARK(BM_SingularValues)->Arg(25)->Arg(50)->Arg(100);

void BM_IstaSteps(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const Matrix a = gaussian(d / 2, d, 2);
  Rng rng(3);
  Vector y(d / 2);
  for (auto& v : y) v = rng.normal();
  const auto p = make_lasso(a, y, 0.1, true);
  SolverConfig cfg;
  cfg.step_policy = FixedStep{1.0 / smoothness(p)};
  cfg.max_iter = 100;
  cfg.record_every = 100;
  const Vector x0(d, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(run(p, cfg, x0));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_IstaSteps)->Arg(100)->Arg(400);

void BM_DykstraProjection(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  PolyhedralSystem s;
  s.m_ineq = gaussian(m, 10, 4);
  s.r_ineq = Vector(m, 1.0);
  const PolyhedralProjector proj(s);
  Rng rng(5);
  Vector v(10);
  for (auto& x : v) x = 3.0 * rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(proj.project(v));
}
BENCHMARK(BM_DykstraProjection)->Arg(5)->Arg(20)->Arg(80);

void BM_HoffmanEnumerated(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  PolyhedralSystem s;
  s.m_ineq = gaussian(m, 6, 6);
  s.r_ineq = Vector(m, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(hoffman_enumerated(s));
}
BENCHMARK(BM_HoffmanEnumerated)->Arg(6)->Arg(10)->Arg(14);

}  // namespace

BENCHMARK_MAIN();
