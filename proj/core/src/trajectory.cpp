#include "modyn/trajectory.hpp"

#include <iomanip>
#include <ostream>
#include <string>

#include "modyn/errors.hpp"

namespace modyn {

void TrajectoryTable::write_csv(std::ostream& out, const std::string& entity_column) const {
  out << "t," << entity_column << ",state,probability\n";
  const auto precision = out.precision();
  out << std::setprecision(17);
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (Eigen::Index c = 0; c < columns(); ++c) {
      out << times[k] << ',' << entities[static_cast<std::size_t>(c)] << ','
          << states[static_cast<std::size_t>(c)] << ','
          << values(static_cast<Eigen::Index>(k), c) << '\n';
    }
  }
  out << std::setprecision(static_cast<int>(precision));
}

void clamp_reporting_negatives(Eigen::MatrixXd& values) {
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
      double& v = values(r, c);
      if (v < 0.0 && v >= -1e-10) {
        v = 0.0;
      }
    }
  }
}

TrajectoryTable make_agent_table(std::span<const double> times, std::span<const int> agent_ids,
                                 const std::vector<std::string>& labels,
                                 const Eigen::MatrixXd& stacked) {
  const auto num_agents = static_cast<Eigen::Index>(agent_ids.size());
  const auto num_states = static_cast<Eigen::Index>(labels.size());
  if (stacked.cols() != num_agents * num_states ||
      stacked.rows() != static_cast<Eigen::Index>(times.size())) {
    throw DimensionMismatch("stacked solution does not match times/agents/states");
  }

  TrajectoryTable table;
  table.times.assign(times.begin(), times.end());
  table.entities.reserve(static_cast<std::size_t>(stacked.cols()));
  table.states.reserve(static_cast<std::size_t>(stacked.cols()));
  for (int id : agent_ids) {
    for (const std::string& label : labels) {
      table.entities.push_back(std::to_string(id));
      table.states.push_back(label);
    }
  }
  table.values = stacked;
  clamp_reporting_negatives(table.values);
  return table;
}

}  // namespace modyn
