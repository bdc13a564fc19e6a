#include "modyn/cli.hpp"

#include <CLI11.hpp>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "modyn/codec.hpp"
#include "modyn/errors.hpp"
#include "modyn/marginal.hpp"
#include "modyn/network.hpp"
#include "modyn/scenario_io.hpp"
#include "modyn/simulate.hpp"
#include "modyn/trajectory.hpp"
#include "modyn/variant.hpp"

namespace modyn {
namespace {

constexpr const char* kCapEnvVar = "MARKOV_OPINION_CAP";

std::vector<double> linspace(double t_end, int points) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    grid[static_cast<std::size_t>(k)] =
        t_end * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  grid.back() = t_end;
  return grid;
}

std::uint64_t resolve_cap(const CLI::Option* cap_option, std::uint64_t cap_flag) {
  if (cap_option != nullptr && cap_option->count() > 0) {
    return cap_flag;
  }
  if (const char* env = std::getenv(kCapEnvVar)) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0' || value == 0) {
      throw ParseError(std::string(kCapEnvVar) + ": \"" + env +
                       "\" is not a positive integer");
    }
    return value;
  }
  return kDefaultStateCap;
}

// Writes to --out when given, to the command's stdout otherwise.
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) {
        throw Error("cannot open output file " + path);
      }
      stream_ = &file_;
    }
  }

  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

void write_distribution_csv(std::ostream& out, const std::vector<int>& agent_ids,
                            const std::vector<std::string>& labels,
                            const Eigen::VectorXd& stacked) {
  out << "agent,state,probability\n";
  out << std::setprecision(17);
  Eigen::Index i = 0;
  for (int id : agent_ids) {
    for (const std::string& label : labels) {
      out << id << ',' << label << ',' << stacked[i++] << '\n';
    }
  }
}

// Stacked per-agent marginals of the requested model and route.
Eigen::VectorXd compute_stationary(const Scenario& scenario, ModelVariant variant,
                                   const std::string& method, std::uint64_t cap) {
  if (method == "network") {
    const NetworkGenerator generator = build_network_generator(scenario, cap);
    const MarginalizationOperator op = build_marginalization(generator.codec);
    return project_marginal(op, network_stationary(generator, variant));
  }
  const MarginalSystem system = assemble_marginal_system(scenario);
  return marginal_stationary(system, variant);
}

TrajectoryTable compute_transient(const Scenario& scenario, ModelVariant variant,
                                  const std::string& method, std::uint64_t cap,
                                  const std::vector<double>& grid) {
  if (method == "network") {
    const NetworkGenerator generator = build_network_generator(scenario, cap);
    return network_transient(generator, variant, independent_initial(scenario, generator.codec),
                             grid);
  }
  const MarginalSystem system = assemble_marginal_system(scenario);
  return marginal_transient(system, variant, stacked_initial(scenario), grid);
}

struct CompareLine {
  std::string label;
  double value = 0.0;
  double tolerance = 0.0;
};

int run_compare(const Scenario& scenario, std::uint64_t cap, double t_end, int points,
                const SimConfig& sim_config, std::ostream& out) {
  const NetworkGenerator generator = build_network_generator(scenario, cap);
  const MarginalizationOperator op = build_marginalization(generator.codec);
  const MarginalSystem system = assemble_marginal_system(scenario);

  const Eigen::VectorXd net_stationary =
      project_marginal(op, network_stationary(generator, ModelVariant::kFull));
  const Eigen::VectorXd marg_stationary = marginal_stationary(system, ModelVariant::kFull);

  const std::vector<double> grid = linspace(t_end, points);
  const Eigen::MatrixXd joint = network_transient_states(
      generator, ModelVariant::kFull, independent_initial(scenario, generator.codec), grid);
  Eigen::MatrixXd net_transient(joint.rows(), op.matrix.rows());
  for (Eigen::Index k = 0; k < joint.rows(); ++k) {
    net_transient.row(k) = (op.matrix * joint.row(k).transpose()).transpose();
  }
  const Eigen::MatrixXd marg_transient = marginal_transient_states(
      system, ModelVariant::kFull, stacked_initial(scenario), grid);

  const SimulationEstimate estimate = estimate_marginals(scenario, sim_config);
  double max_z = 0.0;
  for (Eigen::Index i = 0; i < estimate.mean.size(); ++i) {
    const double gap = std::abs(estimate.mean[i] - net_stationary[i]);
    const double se = estimate.std_error[i];
    max_z = std::max(max_z, se > 0.0 ? gap / se : (gap > 0.0 ? HUGE_VAL : 0.0));
  }

  const std::vector<CompareLine> lines{
      {"stationary max|network-marginal|",
       (net_stationary - marg_stationary).cwiseAbs().maxCoeff(), 1e-9},
      {"transient max|network-marginal|",
       (net_transient - marg_transient).cwiseAbs().maxCoeff(), 1e-6},
      {"simulation max|estimate-stationary|",
       (estimate.mean - net_stationary).cwiseAbs().maxCoeff(), 1e-2},
      {"simulation max z-score", max_z, 3.0},
  };

  bool all_ok = true;
  out << std::setprecision(6);
  for (const CompareLine& line : lines) {
    const bool ok = line.value <= line.tolerance;
    all_ok = all_ok && ok;
    out << line.label << " = " << line.value << " (tol " << line.tolerance << ") "
        << (ok ? "PASS" : "FAIL") << '\n';
  }
  out << "overall: " << (all_ok ? "PASS" : "FAIL") << '\n';
  return all_ok ? exit_code::kOk : exit_code::kTolerance;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coupled continuous-time opinion models: exact joint chain, closed marginal "
               "system and event-driven simulation"};
  app.require_subcommand(1);

  std::string file;
  std::string out_path;
  std::string model = "full";
  std::string method = "marginal";
  std::uint64_t cap_flag = 0;
  double t_end = 10.0;
  int points = 50;
  SimConfig sim_config{200.0, 200, 1, 20.0};
  std::string example_name;

  const auto add_file = [&file](CLI::App* cmd) {
    cmd->add_option("file", file, "Scenario JSON file")->required();
  };
  const auto add_out = [&out_path](CLI::App* cmd) {
    return cmd->add_option("--out", out_path, "Write output to this file instead of stdout");
  };
  const auto add_model = [&model](CLI::App* cmd) {
    cmd->add_option("--model", model, "Interaction terms to include")
        ->check(CLI::IsMember({"isolated", "attract", "full"}));
  };
  const auto add_method = [&method](CLI::App* cmd) {
    cmd->add_option("--method", method, "Computational route")
        ->check(CLI::IsMember({"network", "marginal"}));
  };
  const auto add_cap = [&cap_flag](CLI::App* cmd) {
    return cmd->add_option("--cap", cap_flag,
                           "Joint state-space cap (default 2^20; env MARKOV_OPINION_CAP)")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  add_file(validate_cmd);

  CLI::App* stationary_cmd =
      app.add_subcommand("stationary", "Long-run per-agent state probabilities (CSV)");
  add_file(stationary_cmd);
  add_model(stationary_cmd);
  add_method(stationary_cmd);
  CLI::Option* stationary_cap = add_cap(stationary_cmd);
  add_out(stationary_cmd);

  CLI::App* transient_cmd =
      app.add_subcommand("transient", "Per-agent state probabilities over time (CSV)");
  add_file(transient_cmd);
  transient_cmd->add_option("--t-end", t_end, "Final time")->check(CLI::PositiveNumber);
  transient_cmd->add_option("--points", points, "Grid points from 0 to t-end")
      ->check(CLI::Range(2, 1000000));
  add_model(transient_cmd);
  add_method(transient_cmd);
  CLI::Option* transient_cap = add_cap(transient_cmd);
  add_out(transient_cmd);

  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Monte Carlo occupancy estimates (CSV)");
  add_file(simulate_cmd);
  simulate_cmd->add_option("--replicates", sim_config.replicates, "Independent paths")
      ->check(CLI::Range(1, 100000000));
  simulate_cmd->add_option("--horizon", sim_config.horizon, "Length of each path")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--burn-in", sim_config.burn_in, "Discarded initial stretch")
      ->check(CLI::NonNegativeNumber);
  simulate_cmd->add_option("--seed", sim_config.seed, "Base random seed");
  add_out(simulate_cmd);

  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "Cross-check the joint chain, the marginal system and the simulation");
  add_file(compare_cmd);
  compare_cmd->add_option("--t-end", t_end, "Final time of the transient check")
      ->check(CLI::PositiveNumber);
  compare_cmd->add_option("--points", points, "Grid points of the transient check")
      ->check(CLI::Range(2, 1000000));
  compare_cmd->add_option("--replicates", sim_config.replicates, "Independent paths")
      ->check(CLI::Range(1, 100000000));
  compare_cmd->add_option("--horizon", sim_config.horizon, "Length of each path")
      ->check(CLI::PositiveNumber);
  compare_cmd->add_option("--burn-in", sim_config.burn_in, "Discarded initial stretch")
      ->check(CLI::NonNegativeNumber);
  compare_cmd->add_option("--seed", sim_config.seed, "Base random seed");
  CLI::Option* compare_cap = add_cap(compare_cmd);

  CLI::App* example_cmd = app.add_subcommand("example", "Write a bundled scenario file");
  example_cmd->add_option("name", example_name, "Example name")
      ->required()
      ->check(CLI::IsMember({"intersection"}));
  CLI::Option* example_out =
      example_cmd->add_option("--out", out_path, "Destination file")->required();
  (void)example_out;

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("modyn");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(argv_storage.size());
  for (const std::string& s : argv_storage) {
    argv.push_back(s.c_str());
  }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (app.got_subcommand(validate_cmd)) {
      const Scenario scenario = parse_scenario(file);
      out << "ok: " << scenario.num_agents() << " agents, " << scenario.num_states()
          << " states, " << scenario.groups.size() << " groups, "
          << scenario.repulsions.size() << " repulsion edges\n";
      return exit_code::kOk;
    }

    if (app.got_subcommand(stationary_cmd)) {
      const Scenario scenario = parse_scenario(file);
      const ModelVariant variant = variant_from_string(model);
      const Eigen::VectorXd stacked = compute_stationary(
          scenario, variant, method, resolve_cap(stationary_cap, cap_flag));
      std::vector<int> ids;
      for (const AgentSpec& agent : scenario.agents) {
        ids.push_back(agent.id);
      }
      OutputTarget target(out_path, out);
      write_distribution_csv(target.stream(), ids, scenario.states.labels, stacked);
      return exit_code::kOk;
    }

    if (app.got_subcommand(transient_cmd)) {
      const Scenario scenario = parse_scenario(file);
      const ModelVariant variant = variant_from_string(model);
      const TrajectoryTable table =
          compute_transient(scenario, variant, method, resolve_cap(transient_cap, cap_flag),
                            linspace(t_end, points));
      OutputTarget target(out_path, out);
      table.write_csv(target.stream());
      return exit_code::kOk;
    }

    if (app.got_subcommand(simulate_cmd)) {
      const Scenario scenario = parse_scenario(file);
      const SimulationEstimate estimate = estimate_marginals(scenario, sim_config);
      OutputTarget target(out_path, out);
      std::ostream& csv = target.stream();
      csv << "agent,state,estimate,stderr\n";
      csv << std::setprecision(17);
      Eigen::Index i = 0;
      for (int id : estimate.agent_ids) {
        for (const std::string& label : estimate.state_labels) {
          csv << id << ',' << label << ',' << estimate.mean[i] << ','
              << estimate.std_error[i] << '\n';
          ++i;
        }
      }
      return exit_code::kOk;
    }

    if (app.got_subcommand(compare_cmd)) {
      const Scenario scenario = parse_scenario(file);
      return run_compare(scenario, resolve_cap(compare_cap, cap_flag), t_end, points,
                         sim_config, out);
    }

    if (app.got_subcommand(example_cmd)) {
      OutputTarget target(out_path, out);
      target.stream() << intersection_example_json();
      out << "wrote " << out_path << '\n';
      return exit_code::kOk;
    }
  } catch (const ParseError& e) {
    err << e.what() << '\n';
    return exit_code::kParse;
  } catch (const ValidationError& e) {
    err << e.what();
    return exit_code::kValidation;
  } catch (const CapacityExceeded& e) {
    err << e.what() << '\n';
    return exit_code::kCapacity;
  } catch (const ToleranceNotMet& e) {
    err << e.what() << '\n';
    return exit_code::kTolerance;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code::kFailure;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return exit_code::kFailure;
  }

  err << "no subcommand selected\n";
  return exit_code::kFailure;
}

}  // namespace modyn
