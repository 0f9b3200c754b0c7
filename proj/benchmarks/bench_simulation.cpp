#include <benchmark/benchmark.h>

#include <vector>

#include "pathrisk/rng.hpp"
#include "pathrisk/simulation.hpp"

namespace {

void BM_NextNormal(benchmark::State& state) {
  pathrisk::CounterStream rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(rng.next_normal());
}
BENCHMARK(BM_NextNormal);

void BM_SimulatePathBm(benchmark::State& state) {
  const pathrisk::SimConfig cfg{1.0, static_cast<std::size_t>(state.range(0)), 1, 42};
  std::vector<double> row(cfg.n_steps + 1);
  std::size_t i = 0;
  for (auto _ : state) {
    pathrisk::simulate_path(pathrisk::BrownianParams{0.15, 0.2}, cfg, false, i++, row);
    benchmark::DoNotOptimize(row.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePathBm)->Arg(1000)->Arg(2000);

void BM_SimulatePathKou(benchmark::State& state) {
  pathrisk::KouParams kou;
  kou.diffusion = {0.15, 0.2};
  kou.lambda = 10.0;
  kou.eta1 = 50.0;
  kou.eta2 = 25.0;
  const pathrisk::SimConfig cfg{1.0, 1000, 1, 42};
  std::vector<double> row(cfg.n_steps + 1);
  std::size_t i = 0;
  for (auto _ : state) {
    pathrisk::simulate_path(kou, cfg, false, i++, row);
    benchmark::DoNotOptimize(row.data());
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SimulatePathKou);

void BM_StudyEnsemble(benchmark::State& state) {
  const pathrisk::SimConfig cfg{1.0, 1000, 1000, 42};
  const pathrisk::SimOptions opts{static_cast<unsigned>(state.range(0)), false};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pathrisk::simulate(pathrisk::BrownianParams{0.15, 0.2}, cfg, opts));
  }
}
BENCHMARK(BM_StudyEnsemble)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
