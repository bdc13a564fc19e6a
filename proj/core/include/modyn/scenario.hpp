#pragma once

#include <Eigen/Dense>
#include <string>
#include <unordered_map>
#include <vector>

namespace modyn {

// The decision states shared by every agent. State indices are 0-based
// everywhere in the API; labels exist only for I/O.
struct StateSpace {
  std::vector<std::string> labels;

  [[nodiscard]] int size() const { return static_cast<int>(labels.size()); }
};

// One agent's private continuous-time Markov chain plus its susceptibility
// weight. `rates` is an M x M generator: nonnegative off-diagonals, rows
// summing to zero. `eta` scales every social rate acting on this agent.
struct AgentSpec {
  int id = 0;
  Eigen::MatrixXd rates;
  double eta = 1.0;
  Eigen::VectorXd initial;
};

// A set of mutually attracting agents. `adjacency` follows the order of
// `members`: entry (r, k) weighs how strongly member k pulls member r.
// Rows are normalized to sum to one (a single-member group has the 1x1
// zero matrix).
struct Group {
  std::string name;
  std::vector<int> members;
  double lambda = 0.0;
  Eigen::MatrixXd adjacency;
};

// Directed repulsive influence: every member of `source` pushes every member
// of `target` away from the states the sources occupy. `adjacency` is
// |target| x |source| with rows summing to one.
struct RepulsionEdge {
  std::string target;
  std::string source;
  double gamma = 0.0;
  Eigen::MatrixXd adjacency;
};

struct Scenario {
  StateSpace states;
  std::vector<AgentSpec> agents;
  std::vector<Group> groups;
  std::vector<RepulsionEdge> repulsions;

  [[nodiscard]] int num_agents() const { return static_cast<int>(agents.size()); }
  [[nodiscard]] int num_states() const { return states.size(); }
};

// A joint assignment of one state to every agent, listed in the order the
// agents appear in the scenario.
struct NetworkConfig {
  std::vector<int> assignment;
};

struct Violation {
  std::string location;  // JSON-path-like, e.g. "groups[1].adjacency"
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool passed() const { return violations.empty(); }
  [[nodiscard]] std::string to_string() const;
};

// Checks every model invariant: state space size, agent generators
// (shape, signs, row sums, irreducibility), initial distributions, the
// group partition, adjacency normalization and the repulsion graph.
// Collects all violations instead of stopping at the first.
[[nodiscard]] ValidationReport validate_scenario(const Scenario& scenario);

// Throws ValidationError with the full report when validation fails.
void require_valid(const Scenario& scenario);

// Position lookups shared by force evaluation, generator assembly and the
// simulator. Build once per validated scenario; the scenario must outlive
// the context. "Position" means the agent's index in scenario.agents.
class ScenarioContext {
 public:
  struct IncomingEdge {
    const RepulsionEdge* edge = nullptr;
    std::vector<int> source_positions;
  };

  explicit ScenarioContext(const Scenario& scenario);

  [[nodiscard]] const Scenario& scenario() const { return *scenario_; }
  [[nodiscard]] int num_agents() const { return scenario_->num_agents(); }
  [[nodiscard]] int num_states() const { return scenario_->num_states(); }

  // Throws UnknownAgent.
  [[nodiscard]] int position_of(int agent_id) const;

  [[nodiscard]] int group_index_of(int position) const { return group_index_of_[position]; }
  [[nodiscard]] int row_in_group(int position) const { return row_in_group_[position]; }
  [[nodiscard]] const std::vector<int>& member_positions(int group_index) const {
    return member_positions_[group_index];
  }
  // Repulsion edges whose target group is `group_index`.
  [[nodiscard]] const std::vector<IncomingEdge>& incoming_edges(int group_index) const {
    return incoming_[group_index];
  }

 private:
  const Scenario* scenario_;
  std::unordered_map<int, int> position_by_id_;
  std::vector<int> group_index_of_;
  std::vector<int> row_in_group_;
  std::vector<std::vector<int>> member_positions_;
  std::vector<std::vector<IncomingEdge>> incoming_;
};

}  // namespace modyn
