// swarmnet: command-line front end for the collective-decision toolkit.
//
//   swarmnet simulate <scenario.json>
//   swarmnet equilibria --gamma G --r R --alpha A --sigma S --degree D [--dist <csv>]
//   swarmnet sweep <scenario.json> --axis <gamma|r|alpha|sigma|d> --values <list>
//   swarmnet validate-graph <edgelist>
//
// Exit codes: 0 ok, 2 input error, 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "swarmnet/swarmnet.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

int cmd_simulate(const std::string& path, const std::optional<std::string>& out_dir) {
  auto sc = swarmnet::load_scenario(path);
  if (swarmnet::apply_seed_override(sc)) std::cerr << "seed overridden by SWARMNET_SEED: " << sc.solver.seed << "\n";
  if (out_dir) sc.outputs = *out_dir;
  const auto out = swarmnet::run_simulation(sc);
  std::cout << out.report.dump(2) << "\n";
  std::cerr << "wrote " << out.trajectory_csv.string();
  if (!out.moments_csv.empty()) std::cerr << ", " << out.moments_csv.string();
  std::cerr << ", " << out.report_json.string() << "\n";
  return 0;
}

int cmd_equilibria(const swarmnet::ModelParams& p, std::size_t degree, const std::optional<std::string>& dist_path,
                   std::size_t kmax, double exponent) {
  std::optional<swarmnet::DegreeDistribution> dist;
  if (dist_path) dist = swarmnet::read_distribution_file(*dist_path);
  else if (kmax > 0) dist = swarmnet::powerlaw_distribution(kmax, exponent);
  std::cout << swarmnet::equilibria_report(p, degree, dist).dump(2) << "\n";
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& axis, const std::string& values,
              const std::optional<std::string>& out_path, const swarmnet::SweepOptions& opt) {
  auto sc = swarmnet::load_scenario(path);
  if (swarmnet::apply_seed_override(sc)) std::cerr << "seed overridden by SWARMNET_SEED: " << sc.solver.seed << "\n";
  const auto csv = swarmnet::run_sweep(sc, axis, swarmnet::parse_value_list(values), opt);
  if (out_path) {
    swarmnet::write_file_atomic(*out_path, csv);
    std::cerr << "wrote " << *out_path << "\n";
  } else {
    std::cout << csv;
  }
  return 0;
}

int cmd_validate_graph(const std::string& path) {
  const auto g = swarmnet::read_edge_list_file(path);
  std::cout << "{\"n\": " << g.size() << ", \"degree\": " << g.degree() << ", \"edges\": " << g.edge_count()
            << ", \"girth\": " << swarmnet::girth(g) << ", \"regular\": true}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swarmnet: collective decision dynamics on regular networks of populations"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::string> out_dir;
  auto* simulate = app.add_subcommand("simulate", "Integrate a scenario and write trajectory CSV + report JSON");
  simulate->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  simulate->add_option("--out", out_dir, "Override the scenario's output directory");

  swarmnet::ModelParams params;
  std::size_t degree = 0;
  std::optional<std::string> dist_path;
  std::size_t kmax = 0;
  double exponent = 3.0;
  auto* equilibria = app.add_subcommand("equilibria", "List closed-form equilibria and their stability certificates");
  equilibria->add_option("--gamma", params.gamma, "Spontaneous commitment rate")->required();
  equilibria->add_option("--r", params.r, "Imitation rate")->required();
  equilibria->add_option("--alpha", params.alpha, "Abandonment rate")->required();
  equilibria->add_option("--sigma", params.sigma, "Cross-inhibition rate")->required();
  equilibria->add_option("--degree", degree, "Degree of the regular graph")->required()->check(CLI::PositiveNumber);
  auto* dist_opt = equilibria->add_option("--dist", dist_path, "Degree distribution CSV (k,p)");
  equilibria->add_option("--powerlaw-kmax", kmax, "Use a power-law distribution with this kmax")->excludes(dist_opt);
  equilibria->add_option("--powerlaw-exponent", exponent, "Power-law exponent (default 3)");

  std::string sweep_scenario, axis, values;
  std::optional<std::string> sweep_out;
  swarmnet::SweepOptions sweep_opt;
  bool no_decay = false;
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and tabulate equilibria and certificate margins");
  sweep->add_option("scenario", sweep_scenario, "Base scenario JSON file")->required();
  sweep->add_option("--axis", axis, "gamma | r | alpha | sigma | d")->required();
  sweep->add_option("--values", values, "Comma list v1,v2,... or range lo:hi:count")->required();
  sweep->add_option("--out", sweep_out, "Write CSV here instead of stdout");
  sweep->add_option("--perturbation", sweep_opt.perturbation, "Decay-oracle perturbation size");
  sweep->add_option("--trials", sweep_opt.trials, "Decay-oracle trials per equilibrium");
  sweep->add_option("--horizon", sweep_opt.horizon, "Decay-oracle horizon");
  sweep->add_option("--workers", sweep_opt.workers, "Parallel workers (0 = hardware concurrency)");
  sweep->add_flag("--no-decay", no_decay, "Skip the decay oracle");

  std::string edge_list;
  auto* validate = app.add_subcommand("validate-graph", "Check that an edge list describes a regular simple graph");
  validate->add_option("edgelist", edge_list, "Edge-list file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*simulate) return cmd_simulate(scenario_path, out_dir);
    if (*equilibria) return cmd_equilibria(params, degree, dist_path, kmax, exponent);
    if (*sweep) {
      sweep_opt.decay = !no_decay;
      return cmd_sweep(sweep_scenario, axis, values, sweep_out, sweep_opt);
    }
    if (*validate) return cmd_validate_graph(edge_list);
  } catch (const swarmnet::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const swarmnet::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
