#include "modyn/scenario.hpp"

#include <cmath>
#include <cstddef>
#include <set>
#include <sstream>
#include <unordered_set>

#include "modyn/errors.hpp"

namespace modyn {
namespace {

constexpr double kSumTol = 1e-9;

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

std::string index_location(const char* array, std::size_t i, const char* field = nullptr) {
  std::ostringstream os;
  os << array << '[' << i << ']';
  if (field != nullptr) {
    os << '.' << field;
  }
  return os.str();
}

// Strong connectivity of the digraph with an edge i -> j wherever
// rates(i, j) > 0, checked with one forward and one backward reachability
// sweep from state 0.
bool strongly_connected(const Eigen::MatrixXd& rates) {
  const Eigen::Index n = rates.rows();
  auto reaches_all = [&](bool transpose) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<Eigen::Index> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const Eigen::Index v = stack.back();
      stack.pop_back();
      for (Eigen::Index w = 0; w < n; ++w) {
        const double rate = transpose ? rates(w, v) : rates(v, w);
        if (w != v && rate > 0.0 && !seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          stack.push_back(w);
        }
      }
    }
    for (char s : seen) {
      if (!s) {
        return false;
      }
    }
    return true;
  };
  return reaches_all(false) && reaches_all(true);
}

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void fail(std::string location, std::string message) {
    report_.violations.push_back({std::move(location), std::move(message)});
  }

  // Shared shape/sign/row-sum checks for adjacency-style matrices with
  // prescribed row sums. Returns false when follow-up checks make no sense.
  bool check_weights(const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols,
                     const std::string& location) {
    if (m.rows() != rows || m.cols() != cols) {
      std::ostringstream os;
      os << "expected a " << rows << "x" << cols << " matrix, got " << m.rows() << "x"
         << m.cols();
      fail(location, os.str());
      return false;
    }
    if (!all_finite(m)) {
      fail(location, "entries must be finite");
      return false;
    }
    if ((m.array() < 0.0).any()) {
      fail(location, "entries must be nonnegative");
      return false;
    }
    return true;
  }

  void check_row_sums(const Eigen::MatrixXd& m, double expected, const std::string& location) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double sum = m.row(r).sum();
      if (std::abs(sum - expected) > kSumTol) {
        std::ostringstream os;
        os << "row " << r << " sums to " << sum << ", expected " << expected;
        fail(location, os.str());
      }
    }
  }

 private:
  ValidationReport& report_;
};

}  // namespace

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const Violation& v : violations) {
    os << v.location << ": " << v.message << '\n';
  }
  return os.str();
}

ValidationReport validate_scenario(const Scenario& scenario) {
  ValidationReport report;
  Checker check(report);

  const int num_states = scenario.num_states();
  if (num_states < 2) {
    check.fail("states", "need at least two states");
  }
  {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < scenario.states.labels.size(); ++i) {
      const std::string& label = scenario.states.labels[i];
      if (label.empty()) {
        check.fail(index_location("states", i), "state labels must be nonempty");
      }
      if (!seen.insert(label).second) {
        check.fail(index_location("states", i), "duplicate state label \"" + label + "\"");
      }
    }
  }

  if (scenario.agents.empty()) {
    check.fail("agents", "need at least one agent");
  }
  std::unordered_set<int> agent_ids;
  for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
    const AgentSpec& agent = scenario.agents[i];
    if (agent.id <= 0) {
      check.fail(index_location("agents", i, "id"), "agent ids must be positive");
    } else if (!agent_ids.insert(agent.id).second) {
      std::ostringstream os;
      os << "duplicate agent id " << agent.id;
      check.fail(index_location("agents", i, "id"), os.str());
    }

    if (!(agent.eta > 0.0) || !std::isfinite(agent.eta)) {
      check.fail(index_location("agents", i, "eta"), "eta must be positive and finite");
    }

    const std::string rates_loc = index_location("agents", i, "Q");
    if (agent.rates.rows() != num_states || agent.rates.cols() != num_states) {
      std::ostringstream os;
      os << "expected a " << num_states << "x" << num_states << " generator, got "
         << agent.rates.rows() << "x" << agent.rates.cols();
      check.fail(rates_loc, os.str());
    } else if (!all_finite(agent.rates)) {
      check.fail(rates_loc, "entries must be finite");
    } else {
      bool signs_ok = true;
      for (Eigen::Index r = 0; r < agent.rates.rows(); ++r) {
        for (Eigen::Index c = 0; c < agent.rates.cols(); ++c) {
          if (r != c && agent.rates(r, c) < 0.0) {
            std::ostringstream os;
            os << "off-diagonal entry (" << r << "," << c << ") is negative";
            check.fail(rates_loc, os.str());
            signs_ok = false;
          }
        }
      }
      const double scale = std::max(1.0, agent.rates.cwiseAbs().maxCoeff());
      for (Eigen::Index r = 0; r < agent.rates.rows(); ++r) {
        const double sum = agent.rates.row(r).sum();
        if (std::abs(sum) > kSumTol * scale) {
          std::ostringstream os;
          os << "row " << r << " sums to " << sum << ", expected 0";
          check.fail(rates_loc, os.str());
        }
      }
      if (signs_ok && !strongly_connected(agent.rates)) {
        check.fail(rates_loc, "generator is reducible; every state must be reachable from every other");
      }
    }

    const std::string init_loc = index_location("agents", i, "initial");
    if (agent.initial.size() != num_states) {
      std::ostringstream os;
      os << "expected " << num_states << " entries, got " << agent.initial.size();
      check.fail(init_loc, os.str());
    } else if (!agent.initial.allFinite()) {
      check.fail(init_loc, "entries must be finite");
    } else if ((agent.initial.array() < 0.0).any()) {
      check.fail(init_loc, "entries must be nonnegative");
    } else if (std::abs(agent.initial.sum() - 1.0) > kSumTol) {
      std::ostringstream os;
      os << "entries sum to " << agent.initial.sum() << ", expected 1";
      check.fail(init_loc, os.str());
    }
  }

  std::unordered_map<int, std::string> group_of_agent;
  std::unordered_map<std::string, std::size_t> group_by_name;
  for (std::size_t g = 0; g < scenario.groups.size(); ++g) {
    const Group& group = scenario.groups[g];
    if (group.name.empty()) {
      check.fail(index_location("groups", g, "name"), "group names must be nonempty");
    } else if (!group_by_name.emplace(group.name, g).second) {
      check.fail(index_location("groups", g, "name"),
                 "duplicate group name \"" + group.name + "\"");
    }
    if (!(group.lambda >= 0.0) || !std::isfinite(group.lambda)) {
      check.fail(index_location("groups", g, "lambda"), "lambda must be nonnegative and finite");
    }
    if (group.members.empty()) {
      check.fail(index_location("groups", g, "members"), "groups must have at least one member");
      continue;
    }
    for (std::size_t m = 0; m < group.members.size(); ++m) {
      const int id = group.members[m];
      if (agent_ids.find(id) == agent_ids.end()) {
        std::ostringstream os;
        os << "unknown agent id " << id;
        check.fail(index_location("groups", g, "members"), os.str());
        continue;
      }
      auto [it, inserted] = group_of_agent.emplace(id, group.name);
      if (!inserted) {
        std::ostringstream os;
        os << "agent " << id << " already belongs to group \"" << it->second << "\"";
        check.fail(index_location("groups", g, "members"), os.str());
      }
    }

    const auto n = static_cast<Eigen::Index>(group.members.size());
    const std::string adj_loc = index_location("groups", g, "adjacency");
    if (check.check_weights(group.adjacency, n, n, adj_loc)) {
      for (Eigen::Index r = 0; r < n; ++r) {
        if (group.adjacency(r, r) != 0.0) {
          std::ostringstream os;
          os << "diagonal entry " << r << " must be 0 (no self-attraction)";
          check.fail(adj_loc, os.str());
        }
      }
      // A single member has nobody to follow: its 1x1 adjacency stays zero.
      check.check_row_sums(group.adjacency, n >= 2 ? 1.0 : 0.0, adj_loc);
    }
  }
  for (const AgentSpec& agent : scenario.agents) {
    if (agent.id > 0 && agent_ids.count(agent.id) != 0 &&
        group_of_agent.find(agent.id) == group_of_agent.end()) {
      std::ostringstream os;
      os << "agent " << agent.id << " belongs to no group; groups must partition the agents";
      check.fail("groups", os.str());
    }
  }

  std::set<std::pair<std::string, std::string>> edge_pairs;
  for (std::size_t e = 0; e < scenario.repulsions.size(); ++e) {
    const RepulsionEdge& edge = scenario.repulsions[e];
    const auto target_it = group_by_name.find(edge.target);
    const auto source_it = group_by_name.find(edge.source);
    if (target_it == group_by_name.end()) {
      check.fail(index_location("repulsions", e, "target"),
                 "unknown group \"" + edge.target + "\"");
    }
    if (source_it == group_by_name.end()) {
      check.fail(index_location("repulsions", e, "source"),
                 "unknown group \"" + edge.source + "\"");
    }
    if (!edge.target.empty() && edge.target == edge.source) {
      check.fail(index_location("repulsions", e),
                 "a group cannot repel itself (target equals source)");
    }
    if (!edge_pairs.emplace(edge.target, edge.source).second) {
      check.fail(index_location("repulsions", e),
                 "duplicate repulsion edge \"" + edge.source + "\" -> \"" + edge.target + "\"");
    }
    if (!(edge.gamma >= 0.0) || !std::isfinite(edge.gamma)) {
      check.fail(index_location("repulsions", e, "gamma"),
                 "gamma must be nonnegative and finite");
    }
    if (target_it == group_by_name.end() || source_it == group_by_name.end()) {
      continue;
    }
    const auto rows =
        static_cast<Eigen::Index>(scenario.groups[target_it->second].members.size());
    const auto cols =
        static_cast<Eigen::Index>(scenario.groups[source_it->second].members.size());
    const std::string adj_loc = index_location("repulsions", e, "adjacency");
    if (check.check_weights(edge.adjacency, rows, cols, adj_loc)) {
      check.check_row_sums(edge.adjacency, 1.0, adj_loc);
    }
  }

  return report;
}

void require_valid(const Scenario& scenario) {
  ValidationReport report = validate_scenario(scenario);
  if (!report.passed()) {
    throw ValidationError(report.to_string());
  }
}

ScenarioContext::ScenarioContext(const Scenario& scenario) : scenario_(&scenario) {
  const int n = scenario.num_agents();
  position_by_id_.reserve(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) {
    position_by_id_.emplace(scenario.agents[static_cast<std::size_t>(p)].id, p);
  }

  group_index_of_.assign(static_cast<std::size_t>(n), -1);
  row_in_group_.assign(static_cast<std::size_t>(n), -1);
  member_positions_.resize(scenario.groups.size());
  incoming_.resize(scenario.groups.size());

  std::unordered_map<std::string, int> group_by_name;
  for (std::size_t g = 0; g < scenario.groups.size(); ++g) {
    group_by_name.emplace(scenario.groups[g].name, static_cast<int>(g));
    const Group& group = scenario.groups[g];
    member_positions_[g].reserve(group.members.size());
    for (std::size_t r = 0; r < group.members.size(); ++r) {
      const int pos = position_of(group.members[r]);
      member_positions_[g].push_back(pos);
      group_index_of_[static_cast<std::size_t>(pos)] = static_cast<int>(g);
      row_in_group_[static_cast<std::size_t>(pos)] = static_cast<int>(r);
    }
  }

  for (const RepulsionEdge& edge : scenario.repulsions) {
    const auto target = group_by_name.find(edge.target);
    const auto source = group_by_name.find(edge.source);
    if (target == group_by_name.end() || source == group_by_name.end()) {
      throw ValidationError("repulsion edge references unknown group \"" +
                            (target == group_by_name.end() ? edge.target : edge.source) + "\"");
    }
    IncomingEdge in;
    in.edge = &edge;
    in.source_positions = member_positions_[static_cast<std::size_t>(source->second)];
    incoming_[static_cast<std::size_t>(target->second)].push_back(std::move(in));
  }
}

int ScenarioContext::position_of(int agent_id) const {
  const auto it = position_by_id_.find(agent_id);
  if (it == position_by_id_.end()) {
    throw UnknownAgent("no agent with id " + std::to_string(agent_id));
  }
  return it->second;
}

}  // namespace modyn
