#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace modyn {

// Probabilities over time in long form. Column c belongs to the pair
// (entities[c], states[c]); entry (k, c) is that probability at times[k].
// Agent columns use the decimal agent id as entity.
struct TrajectoryTable {
  std::vector<double> times;
  std::vector<std::string> entities;
  std::vector<std::string> states;
  Eigen::MatrixXd values;

  [[nodiscard]] Eigen::Index columns() const { return values.cols(); }

  // Header "t,<entity column name>,state,probability", one row per
  // (time, column) pair, times outermost. Probabilities are written with
  // enough digits to round-trip a double.
  void write_csv(std::ostream& out, const std::string& entity_column = "agent") const;
};

// Rounds reporting noise away: entries in [-1e-10, 0) become 0. Entries
// below -1e-10 are left alone so real defects stay visible.
void clamp_reporting_negatives(Eigen::MatrixXd& values);

// Wraps an agent-major stacked solution (K x N*M) as a table. `labels` is
// the state label list, repeated per agent.
[[nodiscard]] TrajectoryTable make_agent_table(std::span<const double> times,
                                               std::span<const int> agent_ids,
                                               const std::vector<std::string>& labels,
                                               const Eigen::MatrixXd& stacked);

}  // namespace modyn
