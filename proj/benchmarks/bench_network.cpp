#include <benchmark/benchmark.h>

#include <vector>

#include "modyn/marginal.hpp"
#include "modyn/network.hpp"
#include "modyn/scenario_io.hpp"

namespace {

std::vector<double> grid(double t_end, int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    g[static_cast<std::size_t>(k)] = t_end * k / (points - 1);
  }
  return g;
}

void BM_BuildNetworkGenerator(benchmark::State& state) {
  const modyn::Scenario scenario = modyn::intersection_example();
  for (auto _ : state) {
    benchmark::DoNotOptimize(modyn::build_network_generator(scenario));
  }
}
BENCHMARK(BM_BuildNetworkGenerator);

void BM_NetworkStationary(benchmark::State& state) {
  const modyn::Scenario scenario = modyn::intersection_example();
  const modyn::NetworkGenerator generator = modyn::build_network_generator(scenario);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        modyn::network_stationary(generator, modyn::ModelVariant::kFull));
  }
}
BENCHMARK(BM_NetworkStationary);

void BM_NetworkTransient(benchmark::State& state) {
  const modyn::Scenario scenario = modyn::intersection_example();
  const modyn::NetworkGenerator generator = modyn::build_network_generator(scenario);
  const Eigen::VectorXd initial = modyn::independent_initial(scenario, generator.codec);
  const std::vector<double> t = grid(10.0, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(modyn::network_transient_states(
        generator, modyn::ModelVariant::kFull, initial, t));
  }
}
BENCHMARK(BM_NetworkTransient);

void BM_MarginalTransient(benchmark::State& state) {
  const modyn::Scenario scenario = modyn::intersection_example();
  const modyn::MarginalSystem system = modyn::assemble_marginal_system(scenario);
  const Eigen::VectorXd initial = modyn::stacked_initial(scenario);
  const std::vector<double> t = grid(10.0, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(modyn::marginal_transient_states(
        system, modyn::ModelVariant::kFull, initial, t));
  }
}
BENCHMARK(BM_MarginalTransient);

void BM_MarginalStationary(benchmark::State& state) {
  const modyn::Scenario scenario = modyn::intersection_example();
  const modyn::MarginalSystem system = modyn::assemble_marginal_system(scenario);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        modyn::marginal_stationary(system, modyn::ModelVariant::kFull));
  }
}
BENCHMARK(BM_MarginalStationary);

}  // namespace

BENCHMARK_MAIN();
