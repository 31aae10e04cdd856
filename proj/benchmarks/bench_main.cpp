#include <benchmark/benchmark.h>

#include "topoinfer/bounds.hpp"
#include "topoinfer/complex.hpp"
#include "topoinfer/sampling.hpp"

namespace {

using namespace topoinfer;

void BM_SampleSize(benchmark::State& state) {
  const GeometricParams gp = geometric_params(ManifoldModel::torus_r4());
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_size(gp, 0.5, 0.9, RegimeSpec::clean()));
  }
}
BENCHMARK(BM_SampleSize);

void BM_SampleUniformSphere(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_uniform(ManifoldModel::sphere2_r3(), state.range(0), seed++));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleUniformSphere)->Arg(1000)->Arg(10000);

void BM_DensityCheckCircle(benchmark::State& state) {
  const auto m = ManifoldModel::circle_r2();
  const SampleSet s = sample_uniform(m, 221, 1);
  const int res = density_resolution(m, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(is_eps_dense_in_M(s, m, 0.3, res));
}
BENCHMARK(BM_DensityCheckCircle);

void BM_DensityCheckTorus(benchmark::State& state) {
  const auto m = ManifoldModel::torus_r4();
  const SampleSet s = sample_uniform(m, 4301, 1);
  const int res = density_resolution(m, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(is_eps_dense_in_M(s, m, 0.5, res));
}
BENCHMARK(BM_DensityCheckTorus)->Unit(benchmark::kMillisecond);

void BM_RipsCircle(benchmark::State& state) {
  const SampleSet s = sample_uniform(ManifoldModel::circle_r2(), 221, 1);
  const bool collapse = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_rips(s, 0.3, 2, RipsMetric::Ambient, {.collapse = collapse}));
  }
}
BENCHMARK(BM_RipsCircle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RipsTorusCollapsed(benchmark::State& state) {
  const SampleSet s = sample_uniform(ManifoldModel::torus_r4(), 4301, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        build_rips(s, 0.5, 3, RipsMetric::Intrinsic, {.collapse = true}));
  }
}
BENCHMARK(BM_RipsTorusCollapsed)->Unit(benchmark::kMillisecond);

void BM_BettiSphere(benchmark::State& state) {
  const SampleSet s = sample_uniform(ManifoldModel::sphere2_r3(), 400, 1);
  const SimplicialComplex k = build_rips(s, 0.5, 3, RipsMetric::Ambient);
  state.counters["simplices"] = static_cast<double>(k.size());
  for (auto _ : state) benchmark::DoNotOptimize(betti_numbers(k));
}
BENCHMARK(BM_BettiSphere)->Unit(benchmark::kMillisecond);

void BM_CechTorus(benchmark::State& state) {
  const SampleSet s = sample_uniform(ManifoldModel::torus_r4(), 150, 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_cech_euclidean(s, 0.4, 3));
}
BENCHMARK(BM_CechTorus)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
