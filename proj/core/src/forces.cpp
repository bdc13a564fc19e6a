#include "modyn/forces.hpp"

#include <cstddef>
#include <string>

#include "modyn/errors.hpp"

namespace modyn {
namespace {

void check_state_and_config(const ScenarioContext& context, int state,
                            const NetworkConfig& config) {
  if (state < 0 || state >= context.num_states()) {
    throw IndexOutOfRange("state " + std::to_string(state) + " outside [0, " +
                          std::to_string(context.num_states()) + ")");
  }
  if (static_cast<int>(config.assignment.size()) != context.num_agents()) {
    throw DimensionMismatch("configuration does not cover every agent");
  }
  for (std::size_t p = 0; p < config.assignment.size(); ++p) {
    const int s = config.assignment[p];
    if (s < 0 || s >= context.num_states()) {
      throw IndexOutOfRange("configuration entry " + std::to_string(s) + " at position " +
                            std::to_string(p) + " outside the state space");
    }
  }
}

}  // namespace

double attraction_rate(const ScenarioContext& context, int agent_id, int state,
                       const NetworkConfig& config) {
  check_state_and_config(context, state, config);
  const int pos = context.position_of(agent_id);
  const Scenario& scenario = context.scenario();
  const AgentSpec& agent = scenario.agents[static_cast<std::size_t>(pos)];

  const int g = context.group_index_of(pos);
  const Group& group = scenario.groups[static_cast<std::size_t>(g)];
  const int row = context.row_in_group(pos);
  const std::vector<int>& members = context.member_positions(g);

  double weight = 0.0;
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (config.assignment[static_cast<std::size_t>(members[k])] == state) {
      weight += group.adjacency(row, static_cast<Eigen::Index>(k));
    }
  }
  return agent.eta * group.lambda * weight;
}

double repulsion_rate(const ScenarioContext& context, int agent_id, int state,
                      const NetworkConfig& config) {
  check_state_and_config(context, state, config);
  const int pos = context.position_of(agent_id);
  const Scenario& scenario = context.scenario();
  const AgentSpec& agent = scenario.agents[static_cast<std::size_t>(pos)];

  const int g = context.group_index_of(pos);
  const auto& edges = context.incoming_edges(g);
  if (edges.empty()) {
    return 0.0;
  }
  const int row = context.row_in_group(pos);

  // Each repelling group contributes through the sources currently NOT in
  // `state`; the per-edge share is 1 / (number of incoming edges).
  double total = 0.0;
  for (const ScenarioContext::IncomingEdge& in : edges) {
    double weight = 0.0;
    for (std::size_t k = 0; k < in.source_positions.size(); ++k) {
      if (config.assignment[static_cast<std::size_t>(in.source_positions[k])] != state) {
        weight += in.edge->adjacency(row, static_cast<Eigen::Index>(k));
      }
    }
    total += in.edge->gamma * weight;
  }
  return agent.eta * total / static_cast<double>(edges.size());
}

double modulated_rate(const ScenarioContext& context, int agent_id, int state,
                      const NetworkConfig& config) {
  check_state_and_config(context, state, config);
  const int pos = context.position_of(agent_id);
  const int current = config.assignment[static_cast<std::size_t>(pos)];
  if (current == state) {
    throw SelfTransition("agent " + std::to_string(agent_id) + " already occupies state " +
                         std::to_string(state));
  }
  const AgentSpec& agent = context.scenario().agents[static_cast<std::size_t>(pos)];
  return agent.rates(current, state) + attraction_rate(context, agent_id, state, config) +
         repulsion_rate(context, agent_id, state, config);
}

double attraction_rate(const Scenario& scenario, int agent_id, int state,
                       const NetworkConfig& config) {
  return attraction_rate(ScenarioContext(scenario), agent_id, state, config);
}

double repulsion_rate(const Scenario& scenario, int agent_id, int state,
                      const NetworkConfig& config) {
  return repulsion_rate(ScenarioContext(scenario), agent_id, state, config);
}

double modulated_rate(const Scenario& scenario, int agent_id, int state,
                      const NetworkConfig& config) {
  return modulated_rate(ScenarioContext(scenario), agent_id, state, config);
}

}  // namespace modyn
