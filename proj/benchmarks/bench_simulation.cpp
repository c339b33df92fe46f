#include <benchmark/benchmark.h>

#include "aoi/simulation.hpp"

namespace {

aoi::sim::SimConfig base_config() {
  aoi::sim::SimConfig c;
  c.model = aoi::sim::Model::Mg1SequentialStage;
  const auto stage = aoi::Distribution::exponential(1.0);
  c.params = aoi::mg1::Params{0.1, {stage, stage}, 0.5, aoi::Distribution::exponential(1.0)};
  c.n_nodes = 2;
  c.horizon = 1e5;
  c.replications = 8;
  return c;
}

void BM_ReplicatedWorkers(benchmark::State& state) {
  const auto c = base_config();
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(aoi::sim::run_replicated_parallel(c, workers).aaoi_mean);
  }
}
BENCHMARK(BM_ReplicatedWorkers)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_MarkovReplication(benchmark::State& state) {
  aoi::sim::SimConfig c;
  c.model = aoi::sim::Model::MarkovTandemGlobalFailure;
  const auto n = static_cast<std::size_t>(state.range(0));
  c.params = aoi::sim::MarkovParams{0.3, std::vector<double>(n, 1.0), 0.5, 1.0};
  c.n_nodes = n;
  c.horizon = 1e5;
  c.replications = 1;
  for (auto _ : state) benchmark::DoNotOptimize(aoi::sim::run_replication(c, 0).aaoi);
}
BENCHMARK(BM_MarkovReplication)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
