#include "modyn/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "modyn/errors.hpp"
#include "modyn/linalg.hpp"

namespace modyn {

Eigen::VectorXd agent_stationary(const AgentSpec& agent) {
  const double scale = std::max(1.0, agent.rates.cwiseAbs().maxCoeff());
  return stationary_from_dense_generator(agent.rates, 1e-12 * scale);
}

Eigen::MatrixXd agent_transient_states(const AgentSpec& agent, std::span<const double> t_grid) {
  const Eigen::Index m = agent.rates.rows();
  if (agent.initial.size() != m) {
    throw DimensionMismatch("initial distribution does not match the generator");
  }
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (t_grid[k] < 0.0 || (k > 0 && t_grid[k] < t_grid[k - 1])) {
      throw std::invalid_argument("time grid must be nondecreasing and nonnegative");
    }
  }

  const Eigen::MatrixXd qt = agent.rates.transpose();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(t_grid.size()), m);
  // Propagate increment by increment so each exponential argument stays
  // small; exp(Qᵀ dt) applied to the previous point.
  Eigen::VectorXd p = agent.initial;
  double t_prev = 0.0;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double dt = t_grid[k] - t_prev;
    if (dt > 0.0) {
      p = (qt * dt).exp() * p;
      t_prev = t_grid[k];
    }
    out.row(static_cast<Eigen::Index>(k)) = p.transpose();
  }
  return out;
}

TrajectoryTable agent_transient(const AgentSpec& agent, const StateSpace& states,
                                std::span<const double> t_grid) {
  if (states.size() != agent.rates.rows()) {
    throw DimensionMismatch("state space does not match the generator");
  }
  const std::vector<int> ids{agent.id};
  return make_agent_table(t_grid, ids, states.labels, agent_transient_states(agent, t_grid));
}

}  // namespace modyn
