#include <benchmark/benchmark.h>

#include <random>

#include "ncsched/baselines.hpp"
#include "ncsched/exact.hpp"
#include "ncsched/greedy.hpp"
#include "ncsched/waterfill.hpp"
#include "support/instances.hpp"

namespace {

using namespace ncsched;

void BM_GreedyCambridge(benchmark::State& state) {
  const auto grid = testing::cambridge_grid();
  const RadioParams params;
  const auto demand = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(greedy_solve(grid, params, demand));
}
BENCHMARK(BM_GreedyCambridge)->Arg(5)->Arg(75)->Arg(100);

void BM_GreedyLarge(benchmark::State& state) {
  std::mt19937_64 rng(50);
  const auto inst = testing::random_instance(rng, static_cast<int>(state.range(0)), 4, 300, 300);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_solve(inst.grid, inst.params, inst.demand));
}
BENCHMARK(BM_GreedyLarge)->RangeMultiplier(2)->Range(8, 64);

void BM_WaterFill(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> gain_db(-125, -100);
  std::vector<ChannelGain> gains;
  for (int k = 0; k < state.range(0); ++k) gains.push_back({k, std::pow(10.0, gain_db(rng) / 10)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(water_fill(gains, 200.0, 6.0, kThermalNoiseMwPerMhz, 1e6));
  }
}
BENCHMARK(BM_WaterFill)->Arg(4)->Arg(16)->Arg(64);

void BM_ExactBruteforce(benchmark::State& state) {
  std::mt19937_64 rng(8);
  const auto inst = testing::random_instance(rng, static_cast<int>(state.range(0)), 3, 100, 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_bruteforce(inst.grid, inst.params, inst.demand));
  }
}
BENCHMARK(BM_ExactBruteforce)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ExactGapcut(benchmark::State& state) {
  std::mt19937_64 rng(8);
  const auto inst = testing::random_instance(rng, static_cast<int>(state.range(0)), 3, 100, 100);
  for (auto _ : state) benchmark::DoNotOptimize(exact_gapcut(inst.grid, inst.params, inst.demand));
}
BENCHMARK(BM_ExactGapcut)->Arg(8)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_Mcmr(benchmark::State& state) {
  const auto grid = testing::cambridge_grid();
  const RadioParams params;
  for (auto _ : state) benchmark::DoNotOptimize(mcmr_solve(grid, params, 75.0));
}
BENCHMARK(BM_Mcmr);

}  // namespace

BENCHMARK_MAIN();
