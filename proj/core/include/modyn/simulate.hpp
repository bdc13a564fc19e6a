#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "modyn/scenario.hpp"

namespace modyn {

struct SimConfig {
  double horizon = 0.0;
  int replicates = 1;
  std::uint64_t seed = 0;
  double burn_in = 0.0;
};

struct SimEvent {
  double time = 0.0;
  int agent_id = 0;
  int new_state = 0;
};

// One sampled path of the joint chain: the configuration at t = 0 plus every
// jump up to the horizon, in time order.
struct SimulatedTrajectory {
  NetworkConfig initial;
  std::vector<SimEvent> events;
};

using InitialSampler = std::function<NetworkConfig(std::mt19937_64&)>;

// Draws each agent's starting state independently from its initial
// distribution.
[[nodiscard]] NetworkConfig sample_initial_config(const ScenarioContext& context,
                                                  std::mt19937_64& rng);

// Exact event-driven simulation: holding times are exponential in the total
// outflow rate of the current configuration, and every per-agent rate is
// re-evaluated after each jump because the forces depend on the whole
// configuration.
[[nodiscard]] SimulatedTrajectory simulate_trajectory(const ScenarioContext& context,
                                                      const InitialSampler& sample_initial,
                                                      double horizon, std::mt19937_64& rng);

// Fraction of (burn_in, horizon] each agent spent in each state, stacked
// agent-major. Requires burn_in < horizon.
[[nodiscard]] Eigen::VectorXd occupancy_average(const ScenarioContext& context,
                                                const SimulatedTrajectory& trajectory,
                                                double burn_in, double horizon);

struct SimulationEstimate {
  std::vector<int> agent_ids;
  std::vector<std::string> state_labels;
  Eigen::VectorXd mean;       // stacked agent-major
  Eigen::VectorXd std_error;  // standard error of the mean across replicates
  int replicates = 0;
};

// Runs config.replicates independent paths (replicate i uses seed
// config.seed + i) and averages their occupancies. Deterministic for a fixed
// config: identical inputs give bitwise-identical estimates.
[[nodiscard]] SimulationEstimate estimate_marginals(const Scenario& scenario,
                                                    const SimConfig& config);

}  // namespace modyn
