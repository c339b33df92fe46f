#include <benchmark/benchmark.h>

#include "aoi/mg1_tandem.hpp"
#include "aoi/mm1_tandem.hpp"
#include "aoi/transform.hpp"

namespace {

aoi::mg1::Params mg1_params(int n) {
  const auto stage = aoi::Distribution::exponential(1.0);
  return {0.1, std::vector<aoi::Distribution>(n, stage), 0.5,
          aoi::Distribution::exponential(1.0)};
}

void BM_Mg1Aaoi(benchmark::State& state) {
  const auto p = mg1_params(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(aoi::mg1::aaoi(p));
}
BENCHMARK(BM_Mg1Aaoi)->Arg(1)->Arg(2)->Arg(4);

void BM_Mg1PgfCoefficients(benchmark::State& state) {
  const auto pgf = aoi::mg1::system_pgf(mg1_params(2));
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(aoi::pgf_coefficients(pgf, n));
}
BENCHMARK(BM_Mg1PgfCoefficients)->Arg(16)->Arg(64)->Arg(256);

void BM_Mm1SojournMean(benchmark::State& state) {
  const aoi::mm1::Params p{0.2, 1.0, 1.0, 0.5, 1.0};
  const auto w = aoi::mm1::sojourn_lst(p);
  for (auto _ : state) benchmark::DoNotOptimize(aoi::neg_derivative_at_zero(w));
}
BENCHMARK(BM_Mm1SojournMean);

}  // namespace
