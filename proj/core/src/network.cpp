#include "modyn/network.hpp"

#include <cstddef>
#include <utility>
#include <vector>

#include "modyn/errors.hpp"

namespace modyn {
namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Joint index after one agent's digit changes from `from` to `to`.
std::uint64_t shift_digit(std::uint64_t x, int from, int to, std::uint64_t stride) {
  return x - static_cast<std::uint64_t>(from) * stride + static_cast<std::uint64_t>(to) * stride;
}

void reserve_bounded(Triplets& triplets, std::uint64_t estimate) {
  if (estimate < (std::uint64_t{1} << 26)) {
    triplets.reserve(static_cast<std::size_t>(estimate));
  }
}

SparseRowMatrix from_triplets(const StateIndexCodec& codec, Triplets& triplets) {
  const auto n = static_cast<Eigen::Index>(codec.capacity());
  SparseRowMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

// Per-agent data flattened for the assembly sweep. Weights fold in eta,
// lambda and the per-edge 1/|incoming| share, so the inner loop only sums.
struct AgentTerms {
  const Eigen::MatrixXd* rates = nullptr;
  std::vector<std::pair<int, double>> pulls;   // (group mate position, folded weight)
  std::vector<std::pair<int, double>> pushes;  // (source position, folded weight)
  double push_total = 0.0;                     // sum of push weights
};

std::vector<AgentTerms> collect_terms(const ScenarioContext& context) {
  const Scenario& scenario = context.scenario();
  std::vector<AgentTerms> terms(static_cast<std::size_t>(context.num_agents()));
  for (int p = 0; p < context.num_agents(); ++p) {
    AgentTerms& term = terms[static_cast<std::size_t>(p)];
    const AgentSpec& agent = scenario.agents[static_cast<std::size_t>(p)];
    term.rates = &agent.rates;

    const int g = context.group_index_of(p);
    const Group& group = scenario.groups[static_cast<std::size_t>(g)];
    const int row = context.row_in_group(p);
    const std::vector<int>& members = context.member_positions(g);
    for (std::size_t k = 0; k < members.size(); ++k) {
      const double w = agent.eta * group.lambda * group.adjacency(row, static_cast<Eigen::Index>(k));
      if (w != 0.0) {
        term.pulls.emplace_back(members[k], w);
      }
    }

    const auto& edges = context.incoming_edges(g);
    const double share = edges.empty() ? 0.0 : 1.0 / static_cast<double>(edges.size());
    for (const ScenarioContext::IncomingEdge& in : edges) {
      for (std::size_t k = 0; k < in.source_positions.size(); ++k) {
        const double w = agent.eta * in.edge->gamma * share *
                         in.edge->adjacency(row, static_cast<Eigen::Index>(k));
        if (w != 0.0) {
          term.pushes.emplace_back(in.source_positions[k], w);
          term.push_total += w;
        }
      }
    }
  }
  return terms;
}

}  // namespace

SparseRowMatrix build_isolated_generator(const ScenarioContext& context,
                                         const StateIndexCodec& codec) {
  const Scenario& scenario = context.scenario();
  const int num_agents = codec.num_agents();
  const int num_states = codec.num_states();

  Triplets triplets;
  reserve_bounded(triplets, codec.capacity() *
                                (static_cast<std::uint64_t>(num_agents) *
                                     static_cast<std::uint64_t>(num_states - 1) +
                                 1));

  NetworkConfig config;
  for (std::uint64_t x = 0; x < codec.capacity(); ++x) {
    codec.decode_into(x, config);
    double outflow = 0.0;
    for (int p = 0; p < num_agents; ++p) {
      const Eigen::MatrixXd& rates = scenario.agents[static_cast<std::size_t>(p)].rates;
      const int i = config.assignment[static_cast<std::size_t>(p)];
      const std::uint64_t stride = codec.stride(p);
      for (int j = 0; j < num_states; ++j) {
        if (j == i) {
          continue;
        }
        const double q = rates(i, j);
        if (q != 0.0) {
          const std::uint64_t target = shift_digit(x, i, j, stride);
          triplets.emplace_back(static_cast<Eigen::Index>(x),
                                static_cast<Eigen::Index>(target), q);
          outflow += q;
        }
      }
    }
    if (outflow != 0.0) {
      triplets.emplace_back(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x),
                            -outflow);
    }
  }
  return from_triplets(codec, triplets);
}

std::pair<SparseRowMatrix, SparseRowMatrix> build_force_generators(
    const ScenarioContext& context, const StateIndexCodec& codec) {
  const int num_agents = codec.num_agents();
  const int num_states = codec.num_states();
  const std::vector<AgentTerms> terms = collect_terms(context);

  Triplets attract_triplets;
  Triplets repulse_triplets;
  const std::uint64_t estimate =
      codec.capacity() * (static_cast<std::uint64_t>(num_agents) *
                              static_cast<std::uint64_t>(num_states - 1) +
                          1);
  reserve_bounded(attract_triplets, estimate);
  reserve_bounded(repulse_triplets, estimate);

  NetworkConfig config;
  std::vector<double> occupancy(static_cast<std::size_t>(num_states));
  for (std::uint64_t x = 0; x < codec.capacity(); ++x) {
    codec.decode_into(x, config);
    double attract_outflow = 0.0;
    double repulse_outflow = 0.0;
    for (int p = 0; p < num_agents; ++p) {
      const AgentTerms& term = terms[static_cast<std::size_t>(p)];
      const int i = config.assignment[static_cast<std::size_t>(p)];
      const std::uint64_t stride = codec.stride(p);

      if (!term.pulls.empty()) {
        std::fill(occupancy.begin(), occupancy.end(), 0.0);
        for (const auto& [member, weight] : term.pulls) {
          occupancy[static_cast<std::size_t>(config.assignment[static_cast<std::size_t>(member)])] +=
              weight;
        }
        for (int j = 0; j < num_states; ++j) {
          if (j == i) {
            continue;
          }
          const double force = occupancy[static_cast<std::size_t>(j)];
          if (force != 0.0) {
            const std::uint64_t target = shift_digit(x, i, j, stride);
            attract_triplets.emplace_back(static_cast<Eigen::Index>(x),
                                          static_cast<Eigen::Index>(target), force);
            attract_outflow += force;
          }
        }
      }

      if (!term.pushes.empty()) {
        std::fill(occupancy.begin(), occupancy.end(), 0.0);
        for (const auto& [source, weight] : term.pushes) {
          occupancy[static_cast<std::size_t>(config.assignment[static_cast<std::size_t>(source)])] +=
              weight;
        }
        for (int j = 0; j < num_states; ++j) {
          if (j == i) {
            continue;
          }
          // Sources push toward every state they do NOT occupy.
          const double force = term.push_total - occupancy[static_cast<std::size_t>(j)];
          if (force != 0.0) {
            const std::uint64_t target = shift_digit(x, i, j, stride);
            repulse_triplets.emplace_back(static_cast<Eigen::Index>(x),
                                          static_cast<Eigen::Index>(target), force);
            repulse_outflow += force;
          }
        }
      }
    }
    if (attract_outflow != 0.0) {
      attract_triplets.emplace_back(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x),
                                    -attract_outflow);
    }
    if (repulse_outflow != 0.0) {
      repulse_triplets.emplace_back(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x),
                                    -repulse_outflow);
    }
  }
  return {from_triplets(codec, attract_triplets), from_triplets(codec, repulse_triplets)};
}

NetworkGenerator build_network_generator(const Scenario& scenario, std::uint64_t cap) {
  require_valid(scenario);
  StateIndexCodec codec = make_codec(scenario, cap);
  ScenarioContext context(scenario);
  SparseRowMatrix isolated = build_isolated_generator(context, codec);
  auto [attraction, repulsion] = build_force_generators(context, codec);
  std::vector<int> ids;
  ids.reserve(scenario.agents.size());
  for (const AgentSpec& agent : scenario.agents) {
    ids.push_back(agent.id);
  }
  return {std::move(codec),      std::move(isolated), std::move(attraction),
          std::move(repulsion),  std::move(ids),      scenario.states.labels};
}

SparseRowMatrix variant_generator(const NetworkGenerator& generator, ModelVariant variant) {
  SparseRowMatrix sum = generator.isolated;
  if (variant != ModelVariant::kIsolated) {
    sum = sum + generator.attraction;
  }
  if (variant == ModelVariant::kFull) {
    sum = sum + generator.repulsion;
  }
  sum.makeCompressed();
  return sum;
}

Eigen::VectorXd independent_initial(const Scenario& scenario, const StateIndexCodec& codec) {
  Eigen::VectorXd initial(static_cast<Eigen::Index>(codec.capacity()));
  NetworkConfig config;
  for (std::uint64_t x = 0; x < codec.capacity(); ++x) {
    codec.decode_into(x, config);
    double prob = 1.0;
    for (int p = 0; p < codec.num_agents(); ++p) {
      prob *= scenario.agents[static_cast<std::size_t>(p)].initial[config.assignment[static_cast<std::size_t>(p)]];
    }
    initial[static_cast<Eigen::Index>(x)] = prob;
  }
  return initial;
}

Eigen::MatrixXd network_transient_states(const NetworkGenerator& generator,
                                         ModelVariant variant, const Eigen::VectorXd& initial,
                                         std::span<const double> t_grid,
                                         const OdeOptions& options) {
  if (initial.size() != static_cast<Eigen::Index>(generator.codec.capacity())) {
    throw DimensionMismatch("initial distribution does not match the joint state space");
  }
  const Eigen::SparseMatrix<double> forward = variant_generator(generator, variant).transpose();
  const OdeDerivative f = [&forward](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.noalias() = forward * y;
  };
  return integrate_to_grid(f, 0.0, initial, t_grid, options);
}

TrajectoryTable network_transient(const NetworkGenerator& generator, ModelVariant variant,
                                  const Eigen::VectorXd& initial,
                                  std::span<const double> t_grid, const OdeOptions& options) {
  const Eigen::MatrixXd joint = network_transient_states(generator, variant, initial, t_grid, options);
  const MarginalizationOperator op = build_marginalization(generator.codec);
  Eigen::MatrixXd stacked(joint.rows(), op.matrix.rows());
  for (Eigen::Index k = 0; k < joint.rows(); ++k) {
    stacked.row(k) = (op.matrix * joint.row(k).transpose()).transpose();
  }
  return make_agent_table(t_grid, generator.agent_ids, generator.state_labels, stacked);
}

Eigen::VectorXd network_stationary(const NetworkGenerator& generator, ModelVariant variant) {
  return stationary_distribution(variant_generator(generator, variant), 1e-10);
}

MarginalizationOperator build_marginalization(const StateIndexCodec& codec) {
  const int num_agents = codec.num_agents();
  const int num_states = codec.num_states();

  Triplets triplets;
  reserve_bounded(triplets, codec.capacity() * static_cast<std::uint64_t>(num_agents));
  NetworkConfig config;
  for (std::uint64_t x = 0; x < codec.capacity(); ++x) {
    codec.decode_into(x, config);
    for (int p = 0; p < num_agents; ++p) {
      const Eigen::Index row = static_cast<Eigen::Index>(p) * num_states +
                               config.assignment[static_cast<std::size_t>(p)];
      triplets.emplace_back(row, static_cast<Eigen::Index>(x), 1.0);
    }
  }
  MarginalizationOperator op;
  op.matrix.resize(static_cast<Eigen::Index>(num_agents) * num_states,
                   static_cast<Eigen::Index>(codec.capacity()));
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.makeCompressed();
  op.num_agents = num_agents;
  op.num_states = num_states;
  return op;
}

Eigen::VectorXd project_marginal(const MarginalizationOperator& op,
                                 const Eigen::VectorXd& network_probs) {
  if (network_probs.size() != op.matrix.cols()) {
    throw DimensionMismatch("joint distribution does not match the marginalization operator");
  }
  return op.matrix * network_probs;
}

}  // namespace modyn
