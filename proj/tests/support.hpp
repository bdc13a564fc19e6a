#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// deliberately recompute results through different algorithms than the
// library (Kronecker products, uniformization, eigendecomposition, lifted
// matrix exponentials) so agreement is evidence, not circularity.

#include <Eigen/Dense>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "modyn/codec.hpp"
#include "modyn/linalg.hpp"
#include "modyn/marginal.hpp"
#include "modyn/scenario.hpp"

namespace testutil {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline std::vector<double> linspace(double t_end, int points) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    grid[static_cast<std::size_t>(k)] =
        t_end * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  return grid;
}

struct RandomScenarioOptions {
  int min_agents = 2;
  int max_agents = 5;
  int min_states = 2;
  int max_states = 3;
  double min_rate = 0.2;
  double max_rate = 1.5;
  double min_eta = 0.5;
  double max_eta = 3.0;
  double max_lambda = 1.2;
  double max_gamma = 1.2;
  double repulsion_prob = 0.6;
};

// Valid scenario with fully positive private generators, a random partition
// into groups (singletons allowed), normalized adjacencies and a random
// repulsion graph. Agent ids are an arithmetic sequence that usually does
// not match the positions.
modyn::Scenario random_scenario(std::mt19937_64& rng, const RandomScenarioOptions& options = {});

// Uniform random configuration of the scenario's agents.
modyn::NetworkConfig random_config(const modyn::Scenario& scenario, std::mt19937_64& rng);

// Random probability vector with strictly positive entries.
Eigen::VectorXd random_distribution(Eigen::Index n, std::mt19937_64& rng);

// Dense joint generator of the private chains via Kronecker sums.
Eigen::MatrixXd kron_isolated_oracle(const modyn::Scenario& scenario);

// Dense attraction/repulsion joint generators built pairwise from the public
// force evaluations, one matrix entry per single-agent transition.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> per_transition_force_oracle(
    const modyn::Scenario& scenario, const modyn::StateIndexCodec& codec);

// exp(Gᵀ t) p0 through uniformization. Requires max|diag(G)| * t small
// enough that the Poisson weights do not underflow (about 200).
Eigen::VectorXd uniformization_transient(const modyn::SparseRowMatrix& generator,
                                         const Eigen::VectorXd& p0, double t,
                                         double tail_tol = 1e-13);

// Stationary vector as the null eigenvector of Qᵀ from a dense
// eigendecomposition.
Eigen::VectorXd eigen_stationary_oracle(const Eigen::MatrixXd& generator);

// Solution of y' = M y + b at time t through the exponential of the lifted
// homogeneous system on [y; 1].
Eigen::VectorXd affine_expm_transient(const Eigen::MatrixXd& m, const Eigen::VectorXd& b,
                                      const Eigen::VectorXd& y0, double t);

// Kolmogorov-Smirnov statistic of the samples against a continuous CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(const std::string& text);

}  // namespace testutil
