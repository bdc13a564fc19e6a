#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "modyn/forces.hpp"

namespace testutil {
namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Eigen::MatrixXd random_row_normalized(std::mt19937_64& rng, Eigen::Index rows,
                                      Eigen::Index cols, bool zero_diagonal) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      const bool skip = zero_diagonal && r == c;
      m(r, c) = skip ? 0.0 : uniform(rng, 0.1, 1.0);
      sum += m(r, c);
    }
    m.row(r) /= sum;
  }
  return m;
}

}  // namespace

modyn::Scenario random_scenario(std::mt19937_64& rng, const RandomScenarioOptions& options) {
  modyn::Scenario scenario;
  const int num_agents = uniform_int(rng, options.min_agents, options.max_agents);
  const int num_states = uniform_int(rng, options.min_states, options.max_states);
  for (int j = 0; j < num_states; ++j) {
    scenario.states.labels.push_back("s" + std::to_string(j + 1));
  }

  const int id_start = uniform_int(rng, 1, 5);
  const int id_step = uniform_int(rng, 1, 3);
  for (int p = 0; p < num_agents; ++p) {
    modyn::AgentSpec agent;
    agent.id = id_start + p * id_step;
    agent.eta = uniform(rng, options.min_eta, options.max_eta);
    agent.rates.resize(num_states, num_states);
    for (int r = 0; r < num_states; ++r) {
      double sum = 0.0;
      for (int c = 0; c < num_states; ++c) {
        if (c != r) {
          agent.rates(r, c) = uniform(rng, options.min_rate, options.max_rate);
          sum += agent.rates(r, c);
        }
      }
      agent.rates(r, r) = -sum;
    }
    agent.initial = random_distribution(num_states, rng);
    scenario.agents.push_back(std::move(agent));
  }

  std::vector<int> order(static_cast<std::size_t>(num_agents));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t consumed = 0;
  int group_counter = 0;
  while (consumed < order.size()) {
    const int remaining = static_cast<int>(order.size() - consumed);
    const int size = uniform_int(rng, 1, std::min(3, remaining));
    modyn::Group group;
    group.name = "g" + std::to_string(++group_counter);
    for (int k = 0; k < size; ++k) {
      group.members.push_back(scenario.agents[static_cast<std::size_t>(order[consumed++])].id);
    }
    group.lambda = uniform(rng, 0.0, options.max_lambda);
    group.adjacency = size == 1 ? Eigen::MatrixXd::Zero(1, 1)
                                : random_row_normalized(rng, size, size, true);
    scenario.groups.push_back(std::move(group));
  }

  for (std::size_t g = 0; g < scenario.groups.size(); ++g) {
    for (std::size_t h = 0; h < scenario.groups.size(); ++h) {
      if (g == h || uniform(rng, 0.0, 1.0) >= options.repulsion_prob) {
        continue;
      }
      modyn::RepulsionEdge edge;
      edge.target = scenario.groups[g].name;
      edge.source = scenario.groups[h].name;
      edge.gamma = uniform(rng, 0.01, options.max_gamma);
      edge.adjacency = random_row_normalized(
          rng, static_cast<Eigen::Index>(scenario.groups[g].members.size()),
          static_cast<Eigen::Index>(scenario.groups[h].members.size()), false);
      scenario.repulsions.push_back(std::move(edge));
    }
  }
  return scenario;
}

modyn::NetworkConfig random_config(const modyn::Scenario& scenario, std::mt19937_64& rng) {
  modyn::NetworkConfig config;
  config.assignment.resize(static_cast<std::size_t>(scenario.num_agents()));
  for (int p = 0; p < scenario.num_agents(); ++p) {
    config.assignment[static_cast<std::size_t>(p)] =
        uniform_int(rng, 0, scenario.num_states() - 1);
  }
  return config;
}

Eigen::VectorXd random_distribution(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = uniform(rng, 0.05, 1.0);
  }
  return v / v.sum();
}

Eigen::MatrixXd kron_isolated_oracle(const modyn::Scenario& scenario) {
  const int num_agents = scenario.num_agents();
  const int num_states = scenario.num_states();
  const auto dim = static_cast<Eigen::Index>(std::pow(num_states, num_agents));
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(dim, dim);
  for (int p = 0; p < num_agents; ++p) {
    const auto left = static_cast<Eigen::Index>(std::pow(num_states, p));
    const auto right = static_cast<Eigen::Index>(std::pow(num_states, num_agents - 1 - p));
    const Eigen::MatrixXd with_left = Eigen::kroneckerProduct(
        Eigen::MatrixXd::Identity(left, left),
        scenario.agents[static_cast<std::size_t>(p)].rates);
    total += Eigen::kroneckerProduct(with_left, Eigen::MatrixXd::Identity(right, right));
  }
  return total;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> per_transition_force_oracle(
    const modyn::Scenario& scenario, const modyn::StateIndexCodec& codec) {
  const modyn::ScenarioContext context(scenario);
  const auto dim = static_cast<Eigen::Index>(codec.capacity());
  Eigen::MatrixXd attraction = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd repulsion = Eigen::MatrixXd::Zero(dim, dim);

  for (std::uint64_t x = 0; x < codec.capacity(); ++x) {
    const modyn::NetworkConfig config = codec.decode(x);
    for (int p = 0; p < scenario.num_agents(); ++p) {
      const int id = scenario.agents[static_cast<std::size_t>(p)].id;
      const int current = config.assignment[static_cast<std::size_t>(p)];
      for (int j = 0; j < scenario.num_states(); ++j) {
        if (j == current) {
          continue;
        }
        modyn::NetworkConfig moved = config;
        moved.assignment[static_cast<std::size_t>(p)] = j;
        const auto y = static_cast<Eigen::Index>(codec.encode(moved));
        attraction(static_cast<Eigen::Index>(x), y) =
            modyn::attraction_rate(context, id, j, config);
        repulsion(static_cast<Eigen::Index>(x), y) =
            modyn::repulsion_rate(context, id, j, config);
      }
    }
  }
  for (Eigen::Index r = 0; r < dim; ++r) {
    attraction(r, r) = -attraction.row(r).sum();
    repulsion(r, r) = -repulsion.row(r).sum();
  }
  return {std::move(attraction), std::move(repulsion)};
}

Eigen::VectorXd uniformization_transient(const modyn::SparseRowMatrix& generator,
                                         const Eigen::VectorXd& p0, double t,
                                         double tail_tol) {
  if (t < 0.0) {
    throw std::invalid_argument("uniformization needs t >= 0");
  }
  double max_exit = 0.0;
  for (Eigen::Index i = 0; i < generator.rows(); ++i) {
    max_exit = std::max(max_exit, std::abs(generator.coeff(i, i)));
  }
  const double rate = 1.05 * max_exit + 1e-12;
  const double a = rate * t;
  if (a == 0.0) {
    return p0;
  }
  if (a > 200.0) {
    throw std::invalid_argument("uniformization oracle limited to rate * t <= 200");
  }

  Eigen::SparseMatrix<double> eye(generator.rows(), generator.cols());
  eye.setIdentity();
  const Eigen::SparseMatrix<double> jump_t =
      Eigen::SparseMatrix<double>(generator.transpose()) / rate + eye;

  Eigen::VectorXd term = p0;
  double weight = std::exp(-a);
  double covered = weight;
  Eigen::VectorXd result = weight * term;
  for (int k = 1; covered < 1.0 - tail_tol; ++k) {
    term = jump_t * term;
    weight *= a / static_cast<double>(k);
    result += weight * term;
    covered += weight;
    if (k > 100000) {
      throw std::runtime_error("uniformization did not converge");
    }
  }
  return result;
}

Eigen::VectorXd eigen_stationary_oracle(const Eigen::MatrixXd& generator) {
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(generator.transpose());
  Eigen::Index best = 0;
  double best_mag = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double mag = std::abs(solver.eigenvalues()[i]);
    if (mag < best_mag) {
      best_mag = mag;
      best = i;
    }
  }
  Eigen::VectorXd v = solver.eigenvectors().col(best).real();
  return v / v.sum();
}

Eigen::VectorXd affine_expm_transient(const Eigen::MatrixXd& m, const Eigen::VectorXd& b,
                                      const Eigen::VectorXd& y0, double t) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd lifted = Eigen::MatrixXd::Zero(n + 1, n + 1);
  lifted.topLeftCorner(n, n) = m;
  lifted.topRightCorner(n, 1) = b;
  Eigen::VectorXd z0(n + 1);
  z0.head(n) = y0;
  z0[n] = 1.0;
  const Eigen::VectorXd z = (lifted * t).exp() * z0;
  return z.head(n);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  return d;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream lines(text);
  std::string line;
  bool first = true;
  while (std::getline(lines, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      fields.push_back(cell);
    }
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

}  // namespace testutil
