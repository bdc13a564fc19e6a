#include <benchmark/benchmark.h>

#include <random>

#include "modyn/scenario_io.hpp"
#include "modyn/simulate.hpp"

namespace {

void BM_SimulateTrajectory(benchmark::State& state) {
  const modyn::Scenario scenario = modyn::intersection_example();
  const modyn::ScenarioContext context(scenario);
  const double horizon = static_cast<double>(state.range(0));
  const modyn::InitialSampler sampler = [&context](std::mt19937_64& rng) {
    return modyn::sample_initial_config(context, rng);
  };
  std::uint64_t seed = 1;
  for (auto _ : state) {
    std::mt19937_64 rng(seed++);
    benchmark::DoNotOptimize(modyn::simulate_trajectory(context, sampler, horizon, rng));
  }
}
BENCHMARK(BM_SimulateTrajectory)->Arg(50)->Arg(200);

void BM_EstimateMarginals(benchmark::State& state) {
  const modyn::Scenario scenario = modyn::intersection_example();
  modyn::SimConfig config;
  config.horizon = 50.0;
  config.burn_in = 5.0;
  config.replicates = static_cast<int>(state.range(0));
  config.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(modyn::estimate_marginals(scenario, config));
  }
}
BENCHMARK(BM_EstimateMarginals)->Arg(10)->Arg(50);

}  // namespace
