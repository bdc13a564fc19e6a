#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "modyn/agent.hpp"
#include "modyn/errors.hpp"
#include "modyn/scenario_io.hpp"
#include "support.hpp"

namespace {

modyn::AgentSpec two_state_agent(double up, double down) {
  modyn::AgentSpec agent;
  agent.id = 1;
  agent.eta = 1.0;
  agent.rates.resize(2, 2);
  agent.rates << -up, up, down, -down;
  agent.initial.resize(2);
  agent.initial << 1.0, 0.0;
  return agent;
}

modyn::AgentSpec random_agent(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> rate(0.2, 1.5);
  modyn::AgentSpec agent;
  agent.id = 1;
  agent.eta = 1.0;
  agent.rates = Eigen::MatrixXd::Zero(m, m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      if (r != c) {
        agent.rates(r, c) = rate(rng);
      }
    }
    agent.rates(r, r) = -agent.rates.row(r).sum();
  }
  agent.initial = testutil::random_distribution(m, rng);
  return agent;
}

}  // namespace

TEST_CASE("two-state stationary distribution in closed form") {
  // pi = (down, up) / (up + down)
  const Eigen::VectorXd pi = modyn::agent_stationary(two_state_agent(1.0, 2.0));
  REQUIRE(pi.size() == 2);
  CHECK(std::abs(pi[0] - 2.0 / 3.0) <= 1e-12);
  CHECK(std::abs(pi[1] - 1.0 / 3.0) <= 1e-12);

  const Eigen::VectorXd skew = modyn::agent_stationary(two_state_agent(0.3, 0.1));
  CHECK(std::abs(skew[0] - 0.25) <= 1e-12);
  CHECK(std::abs(skew[1] - 0.75) <= 1e-12);
}

TEST_CASE("symmetric two-state transient in closed form") {
  // p1(t) = (1 - exp(-2t)) / 2 starting from state 0.
  const modyn::AgentSpec agent = two_state_agent(1.0, 1.0);
  const std::vector<double> times = testutil::linspace(3.0, 31);
  const Eigen::MatrixXd traj = modyn::agent_transient_states(agent, times);
  REQUIRE(traj.rows() == static_cast<Eigen::Index>(times.size()));
  REQUIRE(traj.cols() == 2);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double expected = (1.0 - std::exp(-2.0 * times[i])) / 2.0;
    CHECK(std::abs(traj(r, 1) - expected) <= 1e-9);
    CHECK(std::abs(traj(r, 0) - (1.0 - expected)) <= 1e-9);
  }
}

TEST_CASE("stationary matches the eigenvector oracle on random generators") {
  auto rng = testutil::make_rng(31);
  for (int m = 2; m <= 6; ++m) {
    for (int rep = 0; rep < 5; ++rep) {
      const modyn::AgentSpec agent = random_agent(rng, m);
      const Eigen::VectorXd pi = modyn::agent_stationary(agent);
      const Eigen::VectorXd oracle = testutil::eigen_stationary_oracle(agent.rates);
      CHECK((pi - oracle).lpNorm<Eigen::Infinity>() <= 1e-10);
      CHECK(std::abs(pi.sum() - 1.0) <= 1e-12);
      CHECK((pi.array() > 0.0).all());
      CHECK((agent.rates.transpose() * pi).lpNorm<Eigen::Infinity>() <= 1e-12);
    }
  }
}

TEST_CASE("transient conserves mass and matches the series oracle") {
  auto rng = testutil::make_rng(32);
  const modyn::AgentSpec agent = random_agent(rng, 4);
  const std::vector<double> times = testutil::linspace(5.0, 21);
  const Eigen::MatrixXd traj = modyn::agent_transient_states(agent, times);

  const modyn::SparseRowMatrix sparse_q = agent.rates.sparseView();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    CHECK(std::abs(traj.row(r).sum() - 1.0) <= 1e-10);
    CHECK((traj.row(r).array() >= -1e-12).all());
    const Eigen::VectorXd oracle =
        testutil::uniformization_transient(sparse_q, agent.initial, times[i]);
    CHECK((traj.row(r).transpose() - oracle).lpNorm<Eigen::Infinity>() <= 1e-9);
  }
}

TEST_CASE("transient starts at the initial vector and relaxes to stationary") {
  auto rng = testutil::make_rng(33);
  const modyn::AgentSpec agent = random_agent(rng, 3);
  const std::vector<double> times = {0.0, 50.0};
  const Eigen::MatrixXd traj = modyn::agent_transient_states(agent, times);
  CHECK((traj.row(0).transpose() - agent.initial).lpNorm<Eigen::Infinity>() == 0.0);
  const Eigen::VectorXd pi = modyn::agent_stationary(agent);
  CHECK((traj.row(1).transpose() - pi).lpNorm<Eigen::Infinity>() <= 1e-9);
}

TEST_CASE("transient table carries the agent id and state labels") {
  const modyn::Scenario scenario = modyn::intersection_example();
  const modyn::AgentSpec& agent = scenario.agents[3];  // the one that prefers Yield
  const std::vector<double> times = testutil::linspace(1.0, 5);
  const modyn::TrajectoryTable table =
      modyn::agent_transient(agent, scenario.states, times);
  REQUIRE(table.times.size() == times.size());
  REQUIRE(table.values.rows() == static_cast<Eigen::Index>(times.size()));
  REQUIRE(table.values.cols() == 2);
  CHECK(table.entities == std::vector<std::string>{"4", "4"});
  CHECK(table.states[0] == "Yield");
  CHECK(table.states[1] == "Go");
  for (Eigen::Index k = 0; k < table.values.rows(); ++k) {
    CHECK(std::abs(table.values.row(k).sum() - 1.0) <= 1e-12);
  }
}

TEST_CASE("dimension mismatches are rejected") {
  modyn::AgentSpec agent = two_state_agent(1.0, 1.0);
  agent.initial.resize(3);
  agent.initial << 1.0, 0.0, 0.0;
  const std::vector<double> times = {0.0, 1.0};
  CHECK_THROWS_AS((void)modyn::agent_transient_states(agent, times),
                  modyn::DimensionMismatch);

  modyn::AgentSpec rect = two_state_agent(1.0, 1.0);
  rect.rates.resize(2, 3);
  rect.rates.setZero();
  CHECK_THROWS_AS((void)modyn::agent_stationary(rect), modyn::DimensionMismatch);

  const modyn::Scenario scenario = modyn::intersection_example();
  modyn::StateSpace three;
  three.labels = {"a", "b", "c"};
  CHECK_THROWS_AS((void)modyn::agent_transient(scenario.agents[0], three, times),
                  modyn::DimensionMismatch);
}

TEST_CASE("time grids must be sorted and nonnegative") {
  const modyn::AgentSpec agent = two_state_agent(1.0, 1.0);
  const std::vector<double> backwards = {1.0, 0.5};
  const std::vector<double> negative = {-1.0, 0.5};
  CHECK_THROWS_AS((void)modyn::agent_transient_states(agent, backwards),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)modyn::agent_transient_states(agent, negative),
                  std::invalid_argument);
}
