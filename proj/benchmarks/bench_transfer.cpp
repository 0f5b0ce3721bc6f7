#include <benchmark/benchmark.h>

#include <pinning/environment.hpp>
#include <pinning/spectral.hpp>
#include <pinning/transfer.hpp>

#include "support/generators.hpp"

using namespace pinning;

namespace {

PotentialSpec spec_for(int dim) {
  // lambda chosen so the standing conditions hold in every dimension
  return PotentialSpec(dim, {}, 4.0 + 2.0 * dim, 0.1);
}

void BM_TransferStep(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int radius = static_cast<int>(state.range(1));
  const auto spec = spec_for(dim);
  const auto env = sample_environment(7, -1000, 1000);
  const Window w(dim, radius);
  auto f = Field::constant(w, 1.0);
  std::int64_t n = 0;
  for (auto _ : state) {
    f = apply_transfer(spec, env, f, n);
    n = (n + 1) % 1000;
    benchmark::DoNotOptimize(f);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.size()));
}
BENCHMARK(BM_TransferStep)->Args({1, 16})->Args({1, 256})->Args({2, 16})->Args({2, 32})->Args({3, 8});

void BM_Pullback(benchmark::State& state) {
  const auto spec = testsupport::reference_spec();
  const auto env = sample_environment(testsupport::kReferenceSeed, -100000, 100000);
  const Window w(1, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto pair = pullback_eigenfunction(spec, env, Field::constant(w, 1.0));
    benchmark::DoNotOptimize(pair.u);
  }
}
BENCHMARK(BM_Pullback)->Arg(16)->Arg(64);

}  // namespace
