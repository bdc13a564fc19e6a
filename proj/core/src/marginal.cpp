#include "modyn/marginal.hpp"

#include <cstddef>
#include <vector>

#include "modyn/errors.hpp"
#include "modyn/linalg.hpp"

namespace modyn {
namespace {

constexpr double kStationaryResidualTol = 1e-10;

}  // namespace

MarginalSystem assemble_marginal_system(const Scenario& scenario) {
  require_valid(scenario);
  const ScenarioContext context(scenario);
  const int num_agents = scenario.num_agents();
  const int num_states = scenario.num_states();
  const Eigen::Index dim = static_cast<Eigen::Index>(num_agents) * num_states;

  MarginalSystem system;
  system.num_agents = num_agents;
  system.num_states = num_states;
  system.internal = Eigen::MatrixXd::Zero(dim, dim);
  system.attraction = Eigen::MatrixXd::Zero(dim, dim);
  system.repulsion = Eigen::MatrixXd::Zero(dim, dim);
  system.drive = Eigen::VectorXd::Zero(dim);
  system.state_labels = scenario.states.labels;
  system.agent_ids.reserve(scenario.agents.size());
  for (const AgentSpec& agent : scenario.agents) {
    system.agent_ids.push_back(agent.id);
  }

  for (int p = 0; p < num_agents; ++p) {
    const AgentSpec& agent = scenario.agents[static_cast<std::size_t>(p)];
    const Eigen::Index off = static_cast<Eigen::Index>(p) * num_states;
    system.internal.block(off, off, num_states, num_states) = agent.rates.transpose();

    // Attraction couples the agent's occupancy to its group mates': inflow
    // from a mate's marginal at weight eta * lambda * adjacency, outflow at
    // the adjacency row sum. Both are diagonal in the state index.
    const int g = context.group_index_of(p);
    const Group& group = scenario.groups[static_cast<std::size_t>(g)];
    const int row = context.row_in_group(p);
    const std::vector<int>& members = context.member_positions(g);
    double row_sum = 0.0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      const double w =
          agent.eta * group.lambda * group.adjacency(row, static_cast<Eigen::Index>(k));
      if (w != 0.0) {
        const Eigen::Index mate_off = static_cast<Eigen::Index>(members[k]) * num_states;
        system.attraction.block(off, mate_off, num_states, num_states).diagonal().array() += w;
        row_sum += w;
      }
    }
    system.attraction.block(off, off, num_states, num_states).diagonal().array() -= row_sum;

    // Repulsion: a source in state j suppresses the push toward j, which
    // couples with a negative diagonal weight; the state-independent part of
    // the push is the constant drive. The outflow per state is the total
    // push toward the other M-1 states.
    const auto& edges = context.incoming_edges(g);
    if (!edges.empty()) {
      const double share = 1.0 / static_cast<double>(edges.size());
      double push_total = 0.0;
      for (const ScenarioContext::IncomingEdge& in : edges) {
        for (std::size_t k = 0; k < in.source_positions.size(); ++k) {
          const double w = agent.eta * in.edge->gamma * share *
                           in.edge->adjacency(row, static_cast<Eigen::Index>(k));
          if (w != 0.0) {
            const Eigen::Index src_off =
                static_cast<Eigen::Index>(in.source_positions[k]) * num_states;
            system.repulsion.block(off, src_off, num_states, num_states).diagonal().array() -= w;
            push_total += w;
          }
        }
      }
      system.repulsion.block(off, off, num_states, num_states).diagonal().array() -=
          push_total * static_cast<double>(num_states - 1);
      system.drive.segment(off, num_states).array() += push_total;
    }
  }
  return system;
}

Eigen::MatrixXd variant_matrix(const MarginalSystem& system, ModelVariant variant) {
  Eigen::MatrixXd m = system.internal;
  if (variant != ModelVariant::kIsolated) {
    m += system.attraction;
  }
  if (variant == ModelVariant::kFull) {
    m += system.repulsion;
  }
  return m;
}

Eigen::VectorXd variant_drive(const MarginalSystem& system, ModelVariant variant) {
  if (variant == ModelVariant::kFull) {
    return system.drive;
  }
  return Eigen::VectorXd::Zero(system.dimension());
}

Eigen::VectorXd stacked_initial(const Scenario& scenario) {
  const int num_states = scenario.num_states();
  Eigen::VectorXd initial(static_cast<Eigen::Index>(scenario.num_agents()) * num_states);
  for (int p = 0; p < scenario.num_agents(); ++p) {
    initial.segment(static_cast<Eigen::Index>(p) * num_states, num_states) =
        scenario.agents[static_cast<std::size_t>(p)].initial;
  }
  return initial;
}

Eigen::MatrixXd marginal_transient_states(const MarginalSystem& system, ModelVariant variant,
                                          const Eigen::VectorXd& initial,
                                          std::span<const double> t_grid,
                                          const OdeOptions& options) {
  if (initial.size() != system.dimension()) {
    throw DimensionMismatch("initial vector does not match the marginal system");
  }
  const Eigen::MatrixXd m = variant_matrix(system, variant);
  const Eigen::VectorXd drive = variant_drive(system, variant);
  const OdeDerivative f = [&m, &drive](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.noalias() = m * y;
    dy += drive;
  };
  return integrate_to_grid(f, 0.0, initial, t_grid, options);
}

TrajectoryTable marginal_transient(const MarginalSystem& system, ModelVariant variant,
                                   const Eigen::VectorXd& initial,
                                   std::span<const double> t_grid, const OdeOptions& options) {
  return make_agent_table(t_grid, system.agent_ids, system.state_labels,
                          marginal_transient_states(system, variant, initial, t_grid, options));
}

Eigen::VectorXd marginal_stationary(const MarginalSystem& system, ModelVariant variant) {
  Eigen::VectorXd p = affine_stationary(variant_matrix(system, variant),
                                        variant_drive(system, variant), system.num_states,
                                        kStationaryResidualTol);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 && p[i] >= -1e-10) {
      p[i] = 0.0;
    }
  }
  return p;
}

}  // namespace modyn
