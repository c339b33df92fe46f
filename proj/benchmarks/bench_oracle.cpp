#include <benchmark/benchmark.h>

#include "aoi/ctmc_oracle.hpp"

namespace {

// Build and solve at a fixed truncation level; state count is 2(K+1)^2.
void BM_CtmcSolve(benchmark::State& state) {
  const aoi::mm1::Params p{0.2, 1.0, 1.0, 0.5, 1.0};
  const int cap = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto dist = aoi::ctmc::stationary(aoi::ctmc::build(p, cap));
    benchmark::DoNotOptimize(dist.residual());
  }
  state.counters["states"] = 2.0 * (cap + 1) * (cap + 1);
}
BENCHMARK(BM_CtmcSolve)->RangeMultiplier(2)->Range(8, 128)->Unit(benchmark::kMillisecond);

}  // namespace
