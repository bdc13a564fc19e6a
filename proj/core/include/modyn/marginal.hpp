#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "modyn/ode.hpp"
#include "modyn/scenario.hpp"
#include "modyn/trajectory.hpp"
#include "modyn/variant.hpp"

namespace modyn {

// Closed linear system for the stacked per-agent marginals (agent-major,
// state-minor, dimension N*M): d/dt p = (internal + attraction + repulsion) p
// + drive. The interaction terms couple agents only through their marginals;
// the constant drive carries the part of the repulsion that does not depend
// on the sources' states.
struct MarginalSystem {
  int num_agents = 0;
  int num_states = 0;
  Eigen::MatrixXd internal;
  Eigen::MatrixXd attraction;
  Eigen::MatrixXd repulsion;
  Eigen::VectorXd drive;
  std::vector<int> agent_ids;
  std::vector<std::string> state_labels;

  [[nodiscard]] Eigen::Index dimension() const {
    return static_cast<Eigen::Index>(num_agents) * num_states;
  }
};

// Validates the scenario and assembles all blocks.
[[nodiscard]] MarginalSystem assemble_marginal_system(const Scenario& scenario);

// Sum of the system matrices selected by `variant`; the drive belongs to the
// repulsion part and is zero for the other variants.
[[nodiscard]] Eigen::MatrixXd variant_matrix(const MarginalSystem& system, ModelVariant variant);
[[nodiscard]] Eigen::VectorXd variant_drive(const MarginalSystem& system, ModelVariant variant);

// The agents' initial distributions stacked agent-major.
[[nodiscard]] Eigen::VectorXd stacked_initial(const Scenario& scenario);

// Row k is the stacked marginal vector at t_grid[k], propagated from
// `initial` at t = 0.
[[nodiscard]] Eigen::MatrixXd marginal_transient_states(const MarginalSystem& system,
                                                        ModelVariant variant,
                                                        const Eigen::VectorXd& initial,
                                                        std::span<const double> t_grid,
                                                        const OdeOptions& options = {});

[[nodiscard]] TrajectoryTable marginal_transient(const MarginalSystem& system,
                                                 ModelVariant variant,
                                                 const Eigen::VectorXd& initial,
                                                 std::span<const double> t_grid,
                                                 const OdeOptions& options = {});

// Fixed point of the selected system under per-agent normalization.
[[nodiscard]] Eigen::VectorXd marginal_stationary(const MarginalSystem& system,
                                                  ModelVariant variant);

}  // namespace modyn
