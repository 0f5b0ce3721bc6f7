#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include <pinning/hash.hpp>
#include <pinning/hilbert.hpp>

using namespace pinning;

namespace {

void BM_ContractionCoefficient(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  HashStream rng(3);
  std::vector<double> entries(n * n);
  for (auto& e : entries) e = std::exp(rng.uniform(-2, 2));
  const auto k = KernelMatrix::from_entries(n, entries);
  for (auto _ : state) benchmark::DoNotOptimize(contraction_coefficient(k));
}
BENCHMARK(BM_ContractionCoefficient)->Arg(9)->Arg(33)->Arg(81);

void BM_HilbertMetric(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  HashStream rng(4);
  std::vector<double> f(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = std::exp(rng.uniform(-1, 1));
    g[i] = std::exp(rng.uniform(-1, 1));
  }
  for (auto _ : state) benchmark::DoNotOptimize(hilbert_metric(f, g));
}
BENCHMARK(BM_HilbertMetric)->Arg(33)->Arg(1025);

}  // namespace
