#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "pathrisk/acceptability.hpp"
#include "pathrisk/risk_measures.hpp"

namespace {

std::vector<double> normal_sample(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  std::vector<double> x(n);
  for (double& v : x) v = z(rng);
  return x;
}

void BM_AvarAtomSplit(benchmark::State& state) {
  const auto x = normal_sample(static_cast<std::size_t>(state.range(0)));
  const auto d = pathrisk::EmpiricalDistribution::equally_weighted(x);
  for (auto _ : state) benchmark::DoNotOptimize(pathrisk::average_value_at_risk(d, 0.05));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AvarAtomSplit)->RangeMultiplier(10)->Range(100, 1000000)->Complexity();

void BM_AvarOrderStat(benchmark::State& state) {
  const auto x = normal_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pathrisk::avar_order_stat(x, 0.05));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AvarOrderStat)->RangeMultiplier(10)->Range(100, 1000000)->Complexity();

void BM_BuildDistribution(benchmark::State& state) {
  const auto x = normal_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pathrisk::EmpiricalDistribution::equally_weighted(x));
}
BENCHMARK(BM_BuildDistribution)->Arg(1000)->Arg(100000);

void BM_Estimators(benchmark::State& state) {
  const auto finals = normal_sample(1000);
  auto mins = normal_sample(1000);
  auto mdds = normal_sample(1000);
  for (double& m : mins) m = -std::abs(m);
  for (double& m : mdds) m = std::abs(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pathrisk::estimators_from_samples(finals, mins, mdds, 0.01));
  }
}
BENCHMARK(BM_Estimators);

}  // namespace
