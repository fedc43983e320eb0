// Experiment driver: bench <experiment> --alg ... --out FILE.csv
//
// Exit codes: 0 success, 2 invalid configuration, 3 internal invariant
// violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dxhash/experiments.hpp"

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitInternal = 3;

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"DxHash consistent-hashing experiments"};
  app.require_subcommand(1, 1);

  std::string alg = "dxhash";
  std::vector<std::uint64_t> nodes;
  std::vector<std::uint64_t> working;
  std::vector<double> weights;
  std::string out_path;
  dxhash::ExperimentConfig config;
  bool serial = false;

  for (std::string_view name : dxhash::kExperimentNames) {
    CLI::App* sub = app.add_subcommand(std::string(name), "run the " + std::string(name) +
                                                              " experiment");
    sub->add_option("--alg", alg, "dxhash | ring | maglev | jump")->capture_default_str();
    sub->add_option("--nodes", nodes, "cluster size(s), comma separated")->delimiter(',');
    sub->add_option("--working", working, "working node count(s), comma separated")
        ->delimiter(',');
    sub->add_option("--keys", config.keys, "number of keys")->capture_default_str();
    sub->add_option("--seed", config.seed, "workload seed")->capture_default_str();
    sub->add_option("--out", out_path, "output CSV path (stdout if omitted)");
    sub->add_option("--step", config.step, "nodes added per disruption step")
        ->capture_default_str();
    sub->add_option("--weights", weights,
                    "weights of the second half of the cluster, comma separated")
        ->delimiter(',');
    sub->add_option("--threads", config.threads, "OpenMP threads (0 = default)")
        ->capture_default_str();
    sub->add_option("--vnodes", config.virtual_nodes, "ring virtual nodes per physical node")
        ->capture_default_str();
    sub->add_option("--table", config.table_size, "maglev table size (prime, 0 = auto)")
        ->capture_default_str();
    sub->add_flag("--serial", serial, "use the serial reference kernels");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidConfig;
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  try {
    config.algorithm = dxhash::parse_algorithm(alg);
    if (!nodes.empty()) config.nodes = nodes;
    if (!working.empty()) config.working = working;
    if (!weights.empty()) config.weights = weights;
    config.parallel = !serial;

    const dxhash::ExperimentReport report = dxhash::run_experiment(experiment, config);
    if (out_path.empty()) {
      report.write_csv(std::cout);
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "cannot open " << out_path << " for writing\n";
        return kExitInvalidConfig;
      }
      report.write_csv(out);
    }
  } catch (const dxhash::InvariantViolation& e) {
    std::cerr << "internal invariant violation: " << e.what() << '\n';
    return kExitInternal;
  } catch (const dxhash::InvalidArgument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return EXIT_SUCCESS;
}
