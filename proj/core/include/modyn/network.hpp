#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "modyn/codec.hpp"
#include "modyn/linalg.hpp"
#include "modyn/ode.hpp"
#include "modyn/scenario.hpp"
#include "modyn/trajectory.hpp"
#include "modyn/variant.hpp"

namespace modyn {

// The exact joint-chain generator, kept in three Metzler parts with zero row
// sums each: private transitions, attraction and repulsion. Off-diagonal
// entries exist only between configurations that differ in exactly one
// agent's state, and carry the rate evaluated at the source configuration.
struct NetworkGenerator {
  StateIndexCodec codec;
  SparseRowMatrix isolated;
  SparseRowMatrix attraction;
  SparseRowMatrix repulsion;
  std::vector<int> agent_ids;
  std::vector<std::string> state_labels;
};

[[nodiscard]] SparseRowMatrix build_isolated_generator(const ScenarioContext& context,
                                                       const StateIndexCodec& codec);

// Attraction and repulsion parts, in that order.
[[nodiscard]] std::pair<SparseRowMatrix, SparseRowMatrix> build_force_generators(
    const ScenarioContext& context, const StateIndexCodec& codec);

// Validates the scenario, builds the codec (throws CapacityExceeded past
// `cap`) and assembles all three parts.
[[nodiscard]] NetworkGenerator build_network_generator(const Scenario& scenario,
                                                       std::uint64_t cap = kDefaultStateCap);

// Sum of the parts selected by `variant`.
[[nodiscard]] SparseRowMatrix variant_generator(const NetworkGenerator& generator,
                                                ModelVariant variant);

// Product-form joint distribution built from the agents' initial
// distributions (agents start independent).
[[nodiscard]] Eigen::VectorXd independent_initial(const Scenario& scenario,
                                                  const StateIndexCodec& codec);

// Forward equation of the joint chain on a time grid; row k is the joint
// distribution at t_grid[k]. `initial` has codec.capacity() entries.
[[nodiscard]] Eigen::MatrixXd network_transient_states(const NetworkGenerator& generator,
                                                       ModelVariant variant,
                                                       const Eigen::VectorXd& initial,
                                                       std::span<const double> t_grid,
                                                       const OdeOptions& options = {});

[[nodiscard]] TrajectoryTable network_transient(const NetworkGenerator& generator,
                                                ModelVariant variant,
                                                const Eigen::VectorXd& initial,
                                                std::span<const double> t_grid,
                                                const OdeOptions& options = {});

// Stationary distribution of the selected joint generator.
[[nodiscard]] Eigen::VectorXd network_stationary(const NetworkGenerator& generator,
                                                 ModelVariant variant);

// Sparse 0/1 operator taking a joint distribution to the stacked per-agent
// marginals (agent-major, state-minor; N*M rows). Each column holds exactly
// one 1 per agent.
struct MarginalizationOperator {
  SparseRowMatrix matrix;
  int num_agents = 0;
  int num_states = 0;
};

[[nodiscard]] MarginalizationOperator build_marginalization(const StateIndexCodec& codec);

// Throws DimensionMismatch when the vector does not match the operator.
[[nodiscard]] Eigen::VectorXd project_marginal(const MarginalizationOperator& op,
                                               const Eigen::VectorXd& network_probs);

}  // namespace modyn
