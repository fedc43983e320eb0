#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dxhash/errors.hpp"
#include "dxhash/report.hpp"

namespace dxhash {

enum class Algorithm { dxhash, ring, maglev, jump };

Algorithm parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm algorithm) noexcept;

class InvalidConfig : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::dxhash;
  /// Cluster sizes (slots for DxHash; the size the Maglev table is scaled to).
  std::vector<std::uint64_t> nodes{1024};
  /// Working-node counts; empty means "all working". For Ring, Maglev and
  /// Jump this is the number of physical nodes.
  std::vector<std::uint64_t> working;
  std::uint64_t keys = 1'000'000;
  std::uint64_t seed = 1;
  /// Nodes added per disruption step.
  std::uint64_t step = 100;
  /// Weights of the second half of the cluster in the weighted experiment.
  std::vector<double> weights{0.1, 0.3, 0.5, 0.7, 0.9};
  std::size_t virtual_nodes = 100;
  /// Maglev table size; 0 picks the largest prime <= 100 * nodes.
  std::uint64_t table_size = 0;
  int threads = 0;
  /// Use the OpenMP kernels; results are identical either way.
  bool parallel = true;

  /// Throws InvalidConfig.
  void validate() const;
};

ExperimentReport run_balance(const ExperimentConfig& config);
ExperimentReport run_disruption(const ExperimentConfig& config);
ExperimentReport run_asl(const ExperimentConfig& config);
ExperimentReport run_throughput(const ExperimentConfig& config);
ExperimentReport run_weighted(const ExperimentConfig& config);
ExperimentReport run_ars(const ExperimentConfig& config);
ExperimentReport run_memory(const ExperimentConfig& config);

inline constexpr std::string_view kExperimentNames[] = {
    "balance", "disruption", "asl", "throughput", "weighted", "ars", "memory"};

/// Dispatches on an experiment name; throws InvalidConfig for unknown names.
ExperimentReport run_experiment(std::string_view name, const ExperimentConfig& config);

} // namespace dxhash
