#include <benchmark/benchmark.h>

#include <random>

#include "pathrisk/duality.hpp"
#include "pathrisk/verifier.hpp"

namespace {

pathrisk::PathEnsemble instance(std::size_t scenarios, std::size_t points) {
  std::mt19937_64 rng(scenarios * 100 + points);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> values(scenarios * points);
  for (double& v : values) v = u(rng);
  for (std::size_t s = 0; s < scenarios; ++s) values[s * points + points - 1] = 0.5 + 0.5 * u(rng);
  return pathrisk::PathEnsemble::equally_weighted(pathrisk::TimeGrid::uniform(1.0, points - 1), values);
}

void BM_AlphaBruteforce(benchmark::State& state) {
  const auto e = instance(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(pathrisk::alpha_bruteforce(e));
}
BENCHMARK(BM_AlphaBruteforce)->Args({1, 2})->Args({4, 5})->Args({5, 6})->Args({10, 20});

void BM_EquivalenceChain(benchmark::State& state) {
  const auto e = instance(4, 5);
  for (auto _ : state) benchmark::DoNotOptimize(pathrisk::evaluate_chain(e, 1.0));
}
BENCHMARK(BM_EquivalenceChain);

void BM_Verifier(benchmark::State& state) {
  pathrisk::VerifierOptions o;
  o.instances = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pathrisk::run_verifier(o));
}
BENCHMARK(BM_Verifier)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
