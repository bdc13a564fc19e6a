#include "modyn/simulate.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "modyn/errors.hpp"
#include "modyn/forces.hpp"

namespace modyn {
namespace {

// Uniform draw on the open interval (0, 1): 52 random bits shifted into the
// mantissa plus half an ulp, so log() never sees 0 and results do not depend
// on the platform's distribution implementation.
double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 12) + 0.5) * 0x1.0p-52;
}

int pick_state_weighted(const Eigen::VectorXd& probs, std::mt19937_64& rng) {
  double u = uniform_open(rng) * probs.sum();
  for (Eigen::Index j = 0; j < probs.size(); ++j) {
    u -= probs[j];
    if (u <= 0.0) {
      return static_cast<int>(j);
    }
  }
  return static_cast<int>(probs.size() - 1);
}

}  // namespace

NetworkConfig sample_initial_config(const ScenarioContext& context, std::mt19937_64& rng) {
  NetworkConfig config;
  config.assignment.resize(static_cast<std::size_t>(context.num_agents()));
  for (int p = 0; p < context.num_agents(); ++p) {
    config.assignment[static_cast<std::size_t>(p)] =
        pick_state_weighted(context.scenario().agents[static_cast<std::size_t>(p)].initial, rng);
  }
  return config;
}

SimulatedTrajectory simulate_trajectory(const ScenarioContext& context,
                                        const InitialSampler& sample_initial, double horizon,
                                        std::mt19937_64& rng) {
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("horizon must be positive");
  }
  const Scenario& scenario = context.scenario();
  const int num_agents = context.num_agents();
  const int num_states = context.num_states();

  SimulatedTrajectory trajectory;
  trajectory.initial = sample_initial(rng);
  if (static_cast<int>(trajectory.initial.assignment.size()) != num_agents) {
    throw DimensionMismatch("initial sampler returned a configuration of the wrong size");
  }

  NetworkConfig config = trajectory.initial;
  // Flattened candidate transitions, position-major: slot p*(M-1) + c is the
  // c-th non-current state of agent p.
  const std::size_t num_channels =
      static_cast<std::size_t>(num_agents) * static_cast<std::size_t>(num_states - 1);
  std::vector<double> rate(num_channels);
  std::vector<int> target(num_channels);

  double t = 0.0;
  while (true) {
    // The forces read the whole configuration, so every candidate rate is
    // rebuilt after each jump.
    double total = 0.0;
    for (int p = 0; p < num_agents; ++p) {
      const int id = scenario.agents[static_cast<std::size_t>(p)].id;
      const int current = config.assignment[static_cast<std::size_t>(p)];
      std::size_t slot = static_cast<std::size_t>(p) * static_cast<std::size_t>(num_states - 1);
      for (int j = 0; j < num_states; ++j) {
        if (j == current) {
          continue;
        }
        const double r = modulated_rate(context, id, j, config);
        rate[slot] = r;
        target[slot] = j;
        total += r;
        ++slot;
      }
    }
    if (!(total > 0.0)) {
      break;  // absorbing configuration; cannot happen for validated scenarios
    }

    t += -std::log(uniform_open(rng)) / total;
    if (t > horizon) {
      break;
    }

    double u = uniform_open(rng) * total;
    std::size_t chosen = num_channels - 1;
    for (std::size_t s = 0; s < num_channels; ++s) {
      u -= rate[s];
      if (u <= 0.0) {
        chosen = s;
        break;
      }
    }
    const int p = static_cast<int>(chosen / static_cast<std::size_t>(num_states - 1));
    const int new_state = target[chosen];
    config.assignment[static_cast<std::size_t>(p)] = new_state;
    trajectory.events.push_back(
        {t, scenario.agents[static_cast<std::size_t>(p)].id, new_state});
  }
  return trajectory;
}

Eigen::VectorXd occupancy_average(const ScenarioContext& context,
                                  const SimulatedTrajectory& trajectory, double burn_in,
                                  double horizon) {
  if (!(burn_in >= 0.0) || !(burn_in < horizon)) {
    throw std::invalid_argument("need 0 <= burn_in < horizon");
  }
  const int num_agents = context.num_agents();
  const int num_states = context.num_states();
  Eigen::VectorXd occupancy =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_agents) * num_states);

  NetworkConfig config = trajectory.initial;
  double t_prev = 0.0;
  auto accumulate = [&](double until) {
    const double lo = std::max(t_prev, burn_in);
    const double hi = std::min(until, horizon);
    if (hi > lo) {
      for (int p = 0; p < num_agents; ++p) {
        occupancy[static_cast<Eigen::Index>(p) * num_states +
                  config.assignment[static_cast<std::size_t>(p)]] += hi - lo;
      }
    }
  };

  for (const SimEvent& event : trajectory.events) {
    accumulate(event.time);
    config.assignment[static_cast<std::size_t>(context.position_of(event.agent_id))] =
        event.new_state;
    t_prev = event.time;
  }
  accumulate(horizon);
  return occupancy / (horizon - burn_in);
}

SimulationEstimate estimate_marginals(const Scenario& scenario, const SimConfig& config) {
  require_valid(scenario);
  if (config.replicates < 1) {
    throw std::invalid_argument("need at least one replicate");
  }
  const ScenarioContext context(scenario);
  const Eigen::Index dim =
      static_cast<Eigen::Index>(scenario.num_agents()) * scenario.num_states();

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(dim);
  const InitialSampler sampler = [&context](std::mt19937_64& rng) {
    return sample_initial_config(context, rng);
  };
  for (int rep = 0; rep < config.replicates; ++rep) {
    std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(rep));
    const SimulatedTrajectory trajectory =
        simulate_trajectory(context, sampler, config.horizon, rng);
    const Eigen::VectorXd occupancy =
        occupancy_average(context, trajectory, config.burn_in, config.horizon);
    sum += occupancy;
    sum_sq += occupancy.cwiseProduct(occupancy);
  }

  SimulationEstimate estimate;
  estimate.state_labels = scenario.states.labels;
  estimate.agent_ids.reserve(scenario.agents.size());
  for (const AgentSpec& agent : scenario.agents) {
    estimate.agent_ids.push_back(agent.id);
  }
  estimate.replicates = config.replicates;
  const auto n = static_cast<double>(config.replicates);
  estimate.mean = sum / n;
  estimate.std_error = Eigen::VectorXd::Zero(dim);
  if (config.replicates > 1) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double variance =
          std::max(0.0, (sum_sq[i] - n * estimate.mean[i] * estimate.mean[i]) / (n - 1.0));
      estimate.std_error[i] = std::sqrt(variance / n);
    }
  }
  return estimate;
}

}  // namespace modyn
