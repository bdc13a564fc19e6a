#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "modyn/agent.hpp"
#include "modyn/errors.hpp"
#include "modyn/marginal.hpp"
#include "modyn/scenario_io.hpp"
#include "modyn/simulate.hpp"
#include "support.hpp"

namespace {

modyn::Scenario lonely_symmetric_agent() {
  modyn::Scenario s;
  s.states.labels = {"a", "b"};
  modyn::AgentSpec agent;
  agent.id = 1;
  agent.eta = 1.0;
  agent.rates.resize(2, 2);
  agent.rates << -1.0, 1.0, 1.0, -1.0;
  agent.initial.resize(2);
  agent.initial << 1.0, 0.0;
  s.agents.push_back(agent);
  s.groups.push_back({"solo", {1}, 0.0, Eigen::MatrixXd::Zero(1, 1)});
  return s;
}

}  // namespace

TEST_CASE("identical configurations reproduce bitwise") {
  const modyn::Scenario s = modyn::intersection_example();
  const modyn::SimConfig config{30.0, 8, 7, 5.0};
  const modyn::SimulationEstimate a = modyn::estimate_marginals(s, config);
  const modyn::SimulationEstimate b = modyn::estimate_marginals(s, config);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.replicates == 8);
  CHECK(a.agent_ids == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
  CHECK(a.state_labels == std::vector<std::string>{"Yield", "Go"});

  modyn::SimConfig other = config;
  other.seed = 8;
  const modyn::SimulationEstimate c = modyn::estimate_marginals(s, other);
  CHECK(a.mean != c.mean);  // different randomness actually happened
}

TEST_CASE("occupancies are distributions agent by agent") {
  const modyn::Scenario s = modyn::intersection_example();
  const modyn::SimulationEstimate estimate =
      modyn::estimate_marginals(s, modyn::SimConfig{40.0, 10, 3, 4.0});
  REQUIRE(estimate.mean.size() == 14);
  REQUIRE(estimate.std_error.size() == 14);
  for (int p = 0; p < 7; ++p) {
    CHECK(std::abs(estimate.mean.segment(2 * p, 2).sum() - 1.0) <= 1e-12);
  }
  CHECK((estimate.mean.array() >= 0.0).all());
  CHECK((estimate.std_error.array() >= 0.0).all());
}

TEST_CASE("single symmetric agent spends half its time in each state") {
  const modyn::Scenario s = lonely_symmetric_agent();
  const modyn::SimulationEstimate estimate =
      modyn::estimate_marginals(s, modyn::SimConfig{400.0, 40, 11, 40.0});
  REQUIRE(estimate.mean.size() == 2);
  CHECK(estimate.std_error[0] > 0.0);
  CHECK(std::abs(estimate.mean[0] - 0.5) <= 3.0 * estimate.std_error[0]);
  CHECK(std::abs(estimate.mean[0] - 0.5) <= 0.05);
}

TEST_CASE("holding times are exponential") {
  const modyn::Scenario s = lonely_symmetric_agent();
  const modyn::ScenarioContext context(s);
  auto rng = testutil::make_rng(97);
  const modyn::InitialSampler start = [&context](std::mt19937_64& r) {
    return modyn::sample_initial_config(context, r);
  };
  // The exit rate is 1 in both states, so every holding time is Exp(1).
  const modyn::SimulatedTrajectory path =
      modyn::simulate_trajectory(context, start, 11000.0, rng);
  REQUIRE(path.events.size() >= 10000);
  std::vector<double> holdings;
  holdings.reserve(10000);
  double prev = 0.0;
  for (std::size_t k = 0; holdings.size() < 10000; ++k) {
    holdings.push_back(path.events[k].time - prev);
    prev = path.events[k].time;
  }
  const double d = testutil::ks_statistic(
      holdings, [](double x) { return 1.0 - std::exp(-x); });
  // 1% critical value of sqrt(n) * D for large n.
  CHECK(d * std::sqrt(10000.0) <= 1.628);
}

TEST_CASE("event streams are ordered and change state") {
  auto rng = testutil::make_rng(98);
  const modyn::Scenario s = testutil::random_scenario(rng);
  const modyn::ScenarioContext context(s);
  const modyn::InitialSampler start = [&context](std::mt19937_64& r) {
    return modyn::sample_initial_config(context, r);
  };
  for (int rep = 0; rep < 5; ++rep) {
    const modyn::SimulatedTrajectory path =
        modyn::simulate_trajectory(context, start, 25.0, rng);
    REQUIRE(path.initial.assignment.size() == static_cast<std::size_t>(s.num_agents()));
    modyn::NetworkConfig current = path.initial;
    double prev = 0.0;
    for (const modyn::SimEvent& event : path.events) {
      CHECK(event.time > prev);
      CHECK(event.time <= 25.0);
      prev = event.time;
      const int pos = context.position_of(event.agent_id);
      CHECK(event.new_state >= 0);
      CHECK(event.new_state < s.num_states());
      CHECK(event.new_state != current.assignment[static_cast<std::size_t>(pos)]);
      current.assignment[static_cast<std::size_t>(pos)] = event.new_state;
    }
  }
}

TEST_CASE("occupancy averages a handcrafted path") {
  const modyn::Scenario s = lonely_symmetric_agent();
  const modyn::ScenarioContext context(s);
  modyn::SimulatedTrajectory path;
  path.initial.assignment = {0};
  path.events.push_back({5.0, 1, 1});

  Eigen::VectorXd occ = modyn::occupancy_average(context, path, 0.0, 10.0);
  CHECK(std::abs(occ[0] - 0.5) <= 1e-15);
  CHECK(std::abs(occ[1] - 0.5) <= 1e-15);

  occ = modyn::occupancy_average(context, path, 5.0, 10.0);
  CHECK(occ[0] == 0.0);
  CHECK(occ[1] == 1.0);

  occ = modyn::occupancy_average(context, path, 2.0, 10.0);
  CHECK(std::abs(occ[0] - 3.0 / 8.0) <= 1e-15);
  CHECK(std::abs(occ[1] - 5.0 / 8.0) <= 1e-15);

  // A second jump back before the horizon.
  path.events.push_back({8.0, 1, 0});
  occ = modyn::occupancy_average(context, path, 0.0, 10.0);
  CHECK(std::abs(occ[0] - 7.0 / 10.0) <= 1e-15);
  CHECK(std::abs(occ[1] - 3.0 / 10.0) <= 1e-15);
}

TEST_CASE("occupancy handles multiple agents") {
  modyn::Scenario s;
  s.states.labels = {"a", "b"};
  for (int id : {1, 2}) {
    modyn::AgentSpec agent;
    agent.id = id;
    agent.eta = 1.0;
    agent.rates.resize(2, 2);
    agent.rates << -1.0, 1.0, 1.0, -1.0;
    agent.initial.resize(2);
    agent.initial << 1.0, 0.0;
    s.agents.push_back(agent);
  }
  Eigen::MatrixXd swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  s.groups.push_back({"pair", {1, 2}, 0.0, swap});
  const modyn::ScenarioContext context(s);

  modyn::SimulatedTrajectory path;
  path.initial.assignment = {0, 1};
  path.events.push_back({2.0, 2, 0});
  path.events.push_back({6.0, 1, 1});
  const Eigen::VectorXd occ = modyn::occupancy_average(context, path, 0.0, 8.0);
  CHECK(std::abs(occ[0] - 6.0 / 8.0) <= 1e-15);  // agent 1 in a until t=6
  CHECK(std::abs(occ[1] - 2.0 / 8.0) <= 1e-15);
  CHECK(std::abs(occ[2] - 6.0 / 8.0) <= 1e-15);  // agent 2 in b only until t=2
  CHECK(std::abs(occ[3] - 2.0 / 8.0) <= 1e-15);
}

TEST_CASE("initial sampler follows the configured distributions") {
  modyn::Scenario s = lonely_symmetric_agent();
  s.agents[0].initial << 0.3, 0.7;
  const modyn::ScenarioContext context(s);
  auto rng = testutil::make_rng(99);
  const int draws = 20000;
  int in_first = 0;
  for (int k = 0; k < draws; ++k) {
    const modyn::NetworkConfig config = modyn::sample_initial_config(context, rng);
    REQUIRE(config.assignment.size() == 1);
    in_first += config.assignment[0] == 0;
  }
  const double freq = static_cast<double>(in_first) / draws;
  // Four sigma around 0.3.
  CHECK(std::abs(freq - 0.3) <= 4.0 * std::sqrt(0.3 * 0.7 / draws));
}

TEST_CASE("long runs land on the marginal fixed point") {
  const modyn::Scenario s = modyn::intersection_example();
  const modyn::MarginalSystem system = modyn::assemble_marginal_system(s);
  const Eigen::VectorXd pi = modyn::marginal_stationary(system, modyn::ModelVariant::kFull);
  const modyn::SimulationEstimate estimate =
      modyn::estimate_marginals(s, modyn::SimConfig{120.0, 60, 5, 15.0});
  for (Eigen::Index i = 0; i < pi.size(); ++i) {
    CHECK(std::abs(estimate.mean[i] - pi[i]) <=
          3.5 * estimate.std_error[i] + 0.005);
  }
}

TEST_CASE("invalid simulation settings are rejected") {
  const modyn::Scenario s = lonely_symmetric_agent();
  const modyn::ScenarioContext context(s);
  auto rng = testutil::make_rng(1);
  const modyn::InitialSampler start = [&context](std::mt19937_64& r) {
    return modyn::sample_initial_config(context, r);
  };
  CHECK_THROWS_AS((void)modyn::simulate_trajectory(context, start, 0.0, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)modyn::simulate_trajectory(context, start, -1.0, rng),
                  std::invalid_argument);

  modyn::SimulatedTrajectory path;
  path.initial.assignment = {0};
  CHECK_THROWS_AS((void)modyn::occupancy_average(context, path, 5.0, 5.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)modyn::occupancy_average(context, path, -1.0, 5.0),
                  std::invalid_argument);

  CHECK_THROWS_AS((void)modyn::estimate_marginals(s, modyn::SimConfig{10.0, 0, 1, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)modyn::estimate_marginals(s, modyn::SimConfig{10.0, 4, 1, 10.0}),
                  std::invalid_argument);

  const modyn::InitialSampler bad = [](std::mt19937_64&) {
    return modyn::NetworkConfig{{0, 0, 0}};
  };
  CHECK_THROWS_AS((void)modyn::simulate_trajectory(context, bad, 5.0, rng),
                  modyn::DimensionMismatch);
}
