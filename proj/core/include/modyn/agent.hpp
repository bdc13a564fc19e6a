#pragma once

#include <Eigen/Dense>
#include <span>

#include "modyn/scenario.hpp"
#include "modyn/trajectory.hpp"

namespace modyn {

// Stationary distribution of the agent's private chain: solves pᵀQ = 0 with
// entries summing to one. Requires an irreducible generator; throws
// SingularSystem when the solve degenerates.
[[nodiscard]] Eigen::VectorXd agent_stationary(const AgentSpec& agent);

// Row k of the result is the state distribution at t_grid[k], propagated
// from agent.initial at t = 0 through the matrix exponential of the
// generator. The grid must be nondecreasing and start at or after 0.
[[nodiscard]] Eigen::MatrixXd agent_transient_states(const AgentSpec& agent,
                                                     std::span<const double> t_grid);

[[nodiscard]] TrajectoryTable agent_transient(const AgentSpec& agent,
                                              const StateSpace& states,
                                              std::span<const double> t_grid);

}  // namespace modyn
