#include <benchmark/benchmark.h>

#include "torus_stri/incidence.hpp"
#include "torus_stri/nls.hpp"
#include "torus_stri/propagator.hpp"
#include "torus_stri/quadruple.hpp"
#include "torus_stri/random.hpp"

namespace {

using namespace torus;

void BM_GenericHistogram(benchmark::State& state) {
  Rng rng(1);
  const auto f = random_nonnegative_spectrum(rng, 20, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sigma_histogram(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GenericHistogram)->RangeMultiplier(2)->Range(64, 512)->Complexity()->Unit(benchmark::kMillisecond);

void BM_BoxHistogram(benchmark::State& state) {
  const Box box = Box::centered(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(box_sigma_histogram(box));
}
BENCHMARK(BM_BoxHistogram)->RangeMultiplier(2)->Range(4, 64)->Unit(benchmark::kMillisecond);

void BM_RectangleCount(benchmark::State& state) {
  const Box box = Box::centered(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(box_rectangle_count(box));
}
BENCHMARK(BM_RectangleCount)->RangeMultiplier(2)->Range(8, 256)->Unit(benchmark::kMillisecond);

void BM_CollectLines(benchmark::State& state) {
  const auto pts = Box::centered(state.range(0)).points();
  for (auto _ : state) benchmark::DoNotOptimize(collect_lines(pts));
}
BENCHMARK(BM_CollectLines)->DenseRange(4, 16, 4)->Unit(benchmark::kMillisecond);

void BM_Quadrature(benchmark::State& state) {
  const auto f = WeightedSpectrum::indicator(Box::centered(state.range(0)).points());
  const double t = local_horizon(f.size());
  for (auto _ : state) benchmark::DoNotOptimize(l4_quadrature(f, t));
}
BENCHMARK(BM_Quadrature)->RangeMultiplier(2)->Range(4, 32)->Unit(benchmark::kMillisecond);

void BM_StrangStep(benchmark::State& state) {
  Rng rng(2);
  const std::int64_t n = state.range(0);
  NLSField field(random_smooth_spectrum(rng, n, 1.5), n, 1);
  for (auto _ : state) field.strang_step(1e-3);
}
BENCHMARK(BM_StrangStep)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
