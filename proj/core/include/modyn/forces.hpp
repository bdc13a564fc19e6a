#pragma once

#include "modyn/scenario.hpp"

namespace modyn {

// Additional rate with which the agent is pulled toward `state` by its own
// group, given the joint configuration: eta * lambda times the adjacency-
// weighted fraction of group mates currently occupying `state`.
[[nodiscard]] double attraction_rate(const ScenarioContext& context, int agent_id,
                                     int state, const NetworkConfig& config);

// Additional rate with which the agent is pushed toward `state` by groups
// repelling its own: for each incoming edge, eta * gamma / (number of
// incoming edges) times the adjacency-weighted count of sources currently
// NOT occupying `state`, summed over edges.
[[nodiscard]] double repulsion_rate(const ScenarioContext& context, int agent_id,
                                    int state, const NetworkConfig& config);

// Full transition rate out of the agent's current state (taken from
// `config`) into `state`: private rate plus attraction plus repulsion.
// Throws SelfTransition when `state` equals the current state.
[[nodiscard]] double modulated_rate(const ScenarioContext& context, int agent_id,
                                    int state, const NetworkConfig& config);

// Convenience overloads that build the lookup context on the fly.
[[nodiscard]] double attraction_rate(const Scenario& scenario, int agent_id,
                                     int state, const NetworkConfig& config);
[[nodiscard]] double repulsion_rate(const Scenario& scenario, int agent_id,
                                    int state, const NetworkConfig& config);
[[nodiscard]] double modulated_rate(const Scenario& scenario, int agent_id,
                                    int state, const NetworkConfig& config);

}  // namespace modyn
