#include "dxhash/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "dxhash/dxhash.hpp"
#include "dxhash/jump.hpp"
#include "dxhash/kernels.hpp"
#include "dxhash/maglev.hpp"
#include "dxhash/replica.hpp"
#include "dxhash/ring.hpp"
#include "dxhash/snapshot.hpp"
#include "dxhash/weighted.hpp"
#include "dxhash/workload.hpp"

namespace dxhash {

using nlohmann::json;

Algorithm parse_algorithm(std::string_view name) {
  if (name == "dxhash") return Algorithm::dxhash;
  if (name == "ring") return Algorithm::ring;
  if (name == "maglev") return Algorithm::maglev;
  if (name == "jump") return Algorithm::jump;
  throw InvalidConfig("unknown algorithm '" + std::string(name) + "'");
}

std::string_view algorithm_name(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::dxhash: return "dxhash";
    case Algorithm::ring: return "ring";
    case Algorithm::maglev: return "maglev";
    case Algorithm::jump: return "jump";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (keys == 0) {
    throw InvalidConfig("key count must be at least 1");
  }
  if (nodes.empty()) {
    throw InvalidConfig("at least one cluster size is required");
  }
  for (std::uint64_t a : nodes) {
    if (a == 0 || a > (std::uint64_t{1} << 31)) {
      throw InvalidConfig("cluster size " + std::to_string(a) + " outside [1, 2^31]");
    }
  }
  for (std::uint64_t w : working) {
    if (w == 0) {
      throw InvalidConfig("working counts must be positive");
    }
    if (algorithm == Algorithm::dxhash &&
        std::any_of(nodes.begin(), nodes.end(), [w](std::uint64_t a) { return w > a; })) {
      throw InvalidConfig("working count " + std::to_string(w) + " exceeds a cluster size");
    }
  }
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw InvalidConfig("weights must lie in [0, 1]");
    }
  }
  if (virtual_nodes == 0) {
    throw InvalidConfig("virtual node count must be positive");
  }
  if (table_size != 0 && !is_prime(table_size)) {
    throw InvalidConfig("maglev table size must be prime");
  }
  if (threads < 0) {
    throw InvalidConfig("thread count must be non-negative");
  }
}

namespace {

// Thin dispatch between the serial reference kernels and the OpenMP ones.
class Runner {
 public:
  explicit Runner(const ExperimentConfig& config) : config_(config), keys_(config.seed) {
    config.validate();
    kernels::set_threads(config.threads);
  }

  const KeyStream& keys() const { return keys_; }
  std::uint64_t count() const { return config_.keys; }

  template <class Lookup>
  kernels::Assignment assign(const Lookup& lookup) const {
    return config_.parallel ? kernels::parallel::assign(lookup, keys_, config_.keys)
                            : kernels::serial::assign(lookup, keys_, config_.keys);
  }

  std::vector<std::uint64_t> histogram(const kernels::Assignment& a, std::size_t buckets) const {
    return config_.parallel ? kernels::parallel::histogram(a.nodes, buckets)
                            : kernels::serial::histogram(a.nodes, buckets);
  }

  std::uint64_t changed(const kernels::Assignment& before, const kernels::Assignment& after) const {
    return config_.parallel ? kernels::parallel::count_changed(before.nodes, after.nodes)
                            : kernels::serial::count_changed(before.nodes, after.nodes);
  }

  template <std::size_t Bits, class Fn>
  std::array<std::uint64_t, Bits> tally(const Fn& fn) const {
    return config_.parallel ? kernels::tally_parallel<Bits>(config_.keys, fn)
                            : kernels::tally_serial<Bits>(config_.keys, fn);
  }

 private:
  const ExperimentConfig& config_;
  KeyStream keys_;
};

std::vector<std::uint64_t> working_counts(const ExperimentConfig& config, std::uint64_t a) {
  return config.working.empty() ? std::vector<std::uint64_t>{a} : config.working;
}

/// Byte-backed cluster of `size` slots whose working set is the first
/// `working` ids of a seeded permutation, so smaller working sets nest
/// inside larger ones.
FastDxHash make_cluster(std::uint64_t size, std::uint64_t working, std::uint64_t seed) {
  std::vector<NodeState> states(size, NodeState::failed);
  const std::vector<NodeId> order = shuffled_ids(size, seed);
  for (std::uint64_t i = 0; i < working; ++i) {
    states[order[i]] = NodeState::working;
  }
  return FastDxHash(states);
}

std::vector<NodeId> first_ids(std::uint64_t n) {
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), NodeId{0});
  return ids;
}

std::uint64_t maglev_size(const ExperimentConfig& config, std::uint64_t a) {
  return config.table_size != 0 ? config.table_size : MaglevTable::default_table_size(a);
}

auto outcome_of(NodeId node) { return LookupOutcome{node, 1, false}; }

/// Mapping of the configured baseline (or DxHash) with `w` members out of
/// `a` slots.
kernels::Assignment assign_algorithm(const Runner& runner, const ExperimentConfig& config,
                                     std::uint64_t a, std::uint64_t w) {
  switch (config.algorithm) {
    case Algorithm::dxhash: {
      const FastDxHash cluster = make_cluster(a, w, config.seed);
      return runner.assign([&](Seed k) { return cluster.lookup(k); });
    }
    case Algorithm::ring: {
      const auto ids = first_ids(w);
      const HashRing ring(ids, config.virtual_nodes);
      return runner.assign([&](Seed k) { return outcome_of(ring.lookup(k)); });
    }
    case Algorithm::maglev: {
      const auto ids = first_ids(w);
      const MaglevTable table(ids, maglev_size(config, a));
      return runner.assign([&](Seed k) { return outcome_of(table.lookup(k)); });
    }
    case Algorithm::jump: {
      const auto n = static_cast<std::uint32_t>(w);
      return runner.assign([n](Seed k) { return outcome_of(jump_lookup(k, n)); });
    }
  }
  throw InvalidConfig("unknown algorithm");
}

std::vector<NodeId> members(const ExperimentConfig& config, std::uint64_t a, std::uint64_t w) {
  if (config.algorithm != Algorithm::dxhash) {
    return first_ids(w);
  }
  std::vector<NodeId> order = shuffled_ids(a, config.seed);
  order.resize(w);
  std::sort(order.begin(), order.end());
  return order;
}

} // namespace

ExperimentReport run_balance(const ExperimentConfig& config) {
  Runner runner(config);
  ExperimentReport report(config.seed);
  const std::string alg(algorithm_name(config.algorithm));
  for (std::uint64_t a : config.nodes) {
    for (std::uint64_t w : working_counts(config, a)) {
      const kernels::Assignment assignment = assign_algorithm(runner, config, a, w);
      const std::size_t buckets = config.algorithm == Algorithm::dxhash ? a : w;
      const auto counts = runner.histogram(assignment, buckets);
      const auto ids = members(config, a, w);

      const double mean = static_cast<double>(config.keys) / static_cast<double>(w);
      double sum_sq = 0.0;
      for (NodeId id : ids) {
        const double d = static_cast<double>(counts[id]) - mean;
        sum_sq += d * d;
      }
      const double stddev = std::sqrt(sum_sq / static_cast<double>(w));

      json params{{"a", a}, {"w", w}, {"keys", config.keys}};
      if (config.algorithm == Algorithm::ring) params["c"] = config.virtual_nodes;
      if (config.algorithm == Algorithm::maglev) params["m"] = maglev_size(config, a);
      for (NodeId id : ids) {
        json p = params;
        p["node"] = id;
        report.add("balance", alg, p, "count", static_cast<double>(counts[id]));
      }
      report.add("balance", alg, params, "mean", mean);
      report.add("balance", alg, params, "stddev", stddev);
      report.add("balance", alg, params, "cv", stddev / mean);
    }
  }
  return report;
}

ExperimentReport run_disruption(const ExperimentConfig& config) {
  Runner runner(config);
  ExperimentReport report(config.seed);
  const std::string alg(algorithm_name(config.algorithm));
  const std::uint64_t step = config.step;

  for (std::uint64_t a : config.nodes) {
    const std::uint64_t start = config.working.empty() ? std::max<std::uint64_t>(step, 1)
                                                       : config.working.front();
    if (start > a || (step != 0 && start + step > a)) {
      throw InvalidConfig("disruption schedule does not fit in " + std::to_string(a) + " nodes");
    }
    std::uint64_t w = start;
    FastDxHash cluster = make_cluster(a, start, config.seed);
    HashRing ring(first_ids(config.algorithm == Algorithm::ring ? start : 0),
                  config.virtual_nodes);

    auto current = [&](std::uint64_t members) -> kernels::Assignment {
      switch (config.algorithm) {
        case Algorithm::dxhash:
          return runner.assign([&](Seed k) { return cluster.lookup(k); });
        case Algorithm::ring:
          return runner.assign([&](Seed k) { return outcome_of(ring.lookup(k)); });
        case Algorithm::maglev:
        case Algorithm::jump:
          return assign_algorithm(runner, config, a, members);
      }
      throw InvalidConfig("unknown algorithm");
    };

    kernels::Assignment before = current(w);
    do {
      for (std::uint64_t i = 0; i < step; ++i) {
        if (config.algorithm == Algorithm::dxhash) {
          cluster.add_node();
        } else if (config.algorithm == Algorithm::ring) {
          ring.add(static_cast<NodeId>(w + i));
        }
      }
      if (config.algorithm == Algorithm::dxhash) {
        cluster.check_invariants();
      }
      kernels::Assignment after = current(w + step);
      const double ratio =
          static_cast<double>(runner.changed(before, after)) / static_cast<double>(config.keys);
      const double ideal =
          static_cast<double>(step) / static_cast<double>(w + step);
      const json params{{"a", a}, {"base", w}, {"step", step}, {"keys", config.keys}};
      report.add("disruption", alg, params, "remap_ratio", ratio);
      report.add("disruption", alg, params, "ideal_ratio", ideal);
      report.add("disruption", alg, params, "excess_ratio", ratio - ideal);
      w += step;
      before = std::move(after);
    } while (step != 0 && w + step <= a);
  }
  return report;
}

ExperimentReport run_asl(const ExperimentConfig& config) {
  Runner runner(config);
  ExperimentReport report(config.seed);
  const std::string alg(algorithm_name(config.algorithm));
  for (std::uint64_t a : config.nodes) {
    for (std::uint64_t w : working_counts(config, a)) {
      const kernels::Assignment assignment = assign_algorithm(runner, config, a, w);
      const double n = static_cast<double>(config.keys);
      const double asl = static_cast<double>(assignment.probes) / n;
      const double variance = static_cast<double>(assignment.probes_squared) / n - asl * asl;
      const double ratio = config.algorithm == Algorithm::dxhash
                               ? static_cast<double>(a) / static_cast<double>(w)
                               : 1.0;
      const json params{{"a", a}, {"w", w}, {"keys", config.keys}};
      report.add("asl", alg, params, "failure_ratio",
                 config.algorithm == Algorithm::dxhash
                     ? static_cast<double>(a - w) / static_cast<double>(a)
                     : 0.0);
      report.add("asl", alg, params, "asl", asl);
      report.add("asl", alg, params, "variance", variance);
      report.add("asl", alg, params, "expected_asl", ratio);
      report.add("asl", alg, params, "expected_variance", ratio * (ratio - 1.0));
      report.add("asl", alg, params, "fallbacks", static_cast<double>(assignment.fallbacks));
    }
  }
  return report;
}

namespace {

template <class Lookup>
void time_lookups(ExperimentReport& report, const std::string& alg, const json& params,
                  const std::vector<Seed>& seeds, const Lookup& lookup) {
  std::uint64_t probes = 0;
  std::uint64_t checksum = 0;
  const auto start = std::chrono::steady_clock::now();
  for (Seed s : seeds) {
    const LookupOutcome o = lookup(s);
    probes += o.search_length;
    checksum += o.node;
  }
  const auto stop = std::chrono::steady_clock::now();
  const double elapsed = std::chrono::duration<double>(stop - start).count();
  const double n = static_cast<double>(seeds.size());
  report.add("throughput", alg, params, "asl", static_cast<double>(probes) / n);
  report.add("throughput", alg, params, "node_checksum", static_cast<double>(checksum));
  report.add("throughput", alg, params, "elapsed_sec_wallclock", elapsed);
  report.add("throughput", alg, params, "lookups_per_sec_wallclock",
             elapsed > 0 ? n / elapsed : 0.0);
}

} // namespace

ExperimentReport run_throughput(const ExperimentConfig& config) {
  Runner runner(config);
  ExperimentReport report(config.seed);
  report.add_note("timing=single-threaded steady_clock");
  const std::string alg(algorithm_name(config.algorithm));

  std::vector<Seed> seeds(config.keys);
  for (std::uint64_t i = 0; i < config.keys; ++i) {
    seeds[i] = runner.keys().key(i);
  }

  for (std::uint64_t a : config.nodes) {
    for (std::uint64_t w : working_counts(config, a)) {
      json params{{"a", a}, {"w", w}, {"keys", config.keys}};
      switch (config.algorithm) {
        case Algorithm::dxhash: {
          params["failure_ratio"] = static_cast<double>(a - w) / static_cast<double>(a);
          const FastDxHash cluster = make_cluster(a, w, config.seed);
          time_lookups(report, alg, params, seeds, [&](Seed k) { return cluster.lookup(k); });
          break;
        }
        case Algorithm::ring: {
          const HashRing ring(first_ids(w), config.virtual_nodes);
          time_lookups(report, alg, params, seeds,
                       [&](Seed k) { return outcome_of(ring.lookup(k)); });
          break;
        }
        case Algorithm::maglev: {
          const MaglevTable table(first_ids(w), maglev_size(config, a));
          time_lookups(report, alg, params, seeds,
                       [&](Seed k) { return outcome_of(table.lookup(k)); });
          break;
        }
        case Algorithm::jump: {
          const auto n = static_cast<std::uint32_t>(w);
          time_lookups(report, alg, params, seeds,
                       [n](Seed k) { return outcome_of(jump_lookup(k, n)); });
          break;
        }
      }
    }
  }
  return report;
}

ExperimentReport run_weighted(const ExperimentConfig& config) {
  if (config.algorithm != Algorithm::dxhash) {
    throw InvalidConfig("the weighted experiment supports --alg dxhash only");
  }
  Runner runner(config);
  ExperimentReport report(config.seed);
  for (std::uint64_t a : config.nodes) {
    if (a < 2) {
      throw InvalidConfig("the weighted experiment needs at least two nodes");
    }
    const std::uint64_t ones = a / 2;
    for (double n : config.weights) {
      std::vector<double> weights(a, 1.0);
      std::fill(weights.begin() + static_cast<std::ptrdiff_t>(ones), weights.end(), n);
      const WeightedDxHash cluster(weights);
      const kernels::Assignment assignment =
          runner.assign([&](Seed k) { return cluster.lookup(k); });
      const auto counts = runner.histogram(assignment, a);

      const double keys = static_cast<double>(config.keys);
      const double total_weight = cluster.total_weight();
      const double stored_n = cluster.weight(static_cast<NodeId>(a - 1)).value();
      const auto ones_hits = std::accumulate(counts.begin(), counts.begin() + ones, 0.0);
      const auto n_hits = std::accumulate(counts.begin() + ones, counts.end(), 0.0);
      const double mean_one = ones_hits / static_cast<double>(ones);
      const double mean_n = n_hits / static_cast<double>(a - ones);
      const double ratio = mean_n / mean_one;
      const double asl = static_cast<double>(assignment.probes) / keys;

      const json params{{"a", a}, {"n", n}, {"keys", config.keys}};
      report.add("weighted", "dxhash", params, "mean_hits_one_nodes", mean_one);
      report.add("weighted", "dxhash", params, "mean_hits_n_nodes", mean_n);
      report.add("weighted", "dxhash", params, "expected_hits_one_nodes", keys / total_weight);
      report.add("weighted", "dxhash", params, "expected_hits_n_nodes",
                 stored_n * keys / total_weight);
      report.add("weighted", "dxhash", params, "hit_ratio", ratio);
      report.add("weighted", "dxhash", params, "expected_hit_ratio", stored_n);
      report.add("weighted", "dxhash", params, "hit_ratio_relative_error",
                 stored_n > 0 ? std::fabs(ratio - stored_n) / stored_n : 0.0);
      report.add("weighted", "dxhash", params, "asl", asl);
      report.add("weighted", "dxhash", params, "calculations",
                 WeightedDxHash::kHashesPerProbe * asl);
      report.add("weighted", "dxhash", params, "expected_calculations",
                 WeightedDxHash::kHashesPerProbe * static_cast<double>(a) / total_weight);
    }
  }
  return report;
}

ExperimentReport run_ars(const ExperimentConfig& config) {
  if (config.algorithm != Algorithm::dxhash) {
    throw InvalidConfig("the ars experiment supports --alg dxhash only");
  }
  Runner runner(config);
  ExperimentReport report(config.seed);
  for (std::uint64_t a : config.nodes) {
    const FastDxHash before(a, a);
    FastDxHash scaled = before;
    scaled.scale_up();
    FastDxHash after = scaled;
    after.add_node();
    after.check_invariants();

    const ReplicaSpec old_spec = ReplicaSpec::for_cluster(a);
    const ReplicaSpec new_spec = rotate_on_scaleup(old_spec);
    const KeyStream& keys = runner.keys();

    // Bits: 0 plain moved, 1/2 promoted rank moved, 3 demoted moved,
    // 4 promoted moved before the new node joins, 5 any replica moved.
    const auto totals = runner.tally<6>([&](std::uint64_t i) -> std::uint32_t {
      const auto bytes = keys.bytes(i);
      const Seed key = digest(bytes);
      std::uint32_t mask = 0;
      if (before.lookup(key).node != after.lookup(key).node) mask |= 1U;

      const ReplicaPlacement old_p = place_replicas(bytes, before, old_spec);
      const ReplicaPlacement new_p = place_replicas(bytes, after, new_spec);
      const ReplicaPlacement mid_p = place_replicas(bytes, scaled, new_spec);
      if (new_p.nodes[0] != old_p.nodes[1]) mask |= 2U;
      if (new_p.nodes[1] != old_p.nodes[2]) mask |= 4U;
      if (new_p.nodes[2] != old_p.nodes[0]) mask |= 8U;
      if (mid_p.nodes[0] != old_p.nodes[1] || mid_p.nodes[1] != old_p.nodes[2]) mask |= 16U;
      if (mask & 14U) mask |= 32U;
      return mask;
    });

    const double n = static_cast<double>(config.keys);
    const json params{{"a", a}, {"keys", config.keys}};
    report.add("ars", "dxhash", params, "remap_ratio_without_ars", totals[0] / n);
    report.add("ars", "dxhash", params, "remap_ratio_with_ars",
               (totals[1] + totals[2] + totals[3]) / (3.0 * n));
    report.add("ars", "dxhash", params, "promoted_moved_ratio",
               (totals[1] + totals[2]) / (2.0 * n));
    report.add("ars", "dxhash", params, "promoted_moved_scaleup_only",
               static_cast<double>(totals[4]));
    report.add("ars", "dxhash", params, "demoted_unchanged_ratio", 1.0 - totals[3] / n);
    report.add("ars", "dxhash", params, "key_remap_ratio_with_ars", totals[5] / n);
    report.add("ars", "dxhash", params, "analytic_ratio_without_ars", 0.5);
    report.add("ars", "dxhash", params, "analytic_ratio_with_ars", 7.0 / 24.0);
  }
  return report;
}

ExperimentReport run_memory(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report(config.seed);
  const std::string alg(algorithm_name(config.algorithm));
  for (std::uint64_t a : config.nodes) {
    const json params{{"nodes", a}};
    switch (config.algorithm) {
      case Algorithm::dxhash: {
        const DxHash compact(a, a);
        const FastDxHash fast(a, a);
        const auto snapshot = save_snapshot(compact);
        report.add("memory", alg, params, "bit_csa_payload_bytes",
                   static_cast<double>(compact.states().payload_bytes()));
        report.add("memory", alg, params, "bit_csa_snapshot_bytes",
                   static_cast<double>(snapshot.size()));
        report.add("memory", alg, params, "byte_csa_bytes",
                   static_cast<double>(fast.states().payload_bytes()));
        report.add("memory", alg, params, "weighted_csa_bytes",
                   static_cast<double>(a * sizeof(std::uint32_t)));
        break;
      }
      case Algorithm::ring: {
        const double positions = static_cast<double>(a * config.virtual_nodes);
        report.add("memory", alg, json{{"nodes", a}, {"c", config.virtual_nodes}},
                   "analytic_bytes", positions * HashRing::kAnalyticBytesPerPosition);
        report.add("memory", alg, json{{"nodes", a}, {"c", config.virtual_nodes}},
                   "estimated_bytes",
                   positions * (4 * sizeof(void*) + sizeof(std::uint64_t)) +
                       static_cast<double>(a) * (4 * sizeof(void*) + sizeof(NodeId)));
        break;
      }
      case Algorithm::maglev: {
        const std::uint64_t m = config.table_size != 0 ? config.table_size : 100 * a;
        report.add("memory", alg, json{{"nodes", a}, {"m", m}}, "table_bytes",
                   static_cast<double>(m * sizeof(NodeId)));
        break;
      }
      case Algorithm::jump:
        report.add("memory", alg, params, "state_bytes", sizeof(std::uint32_t));
        break;
    }
  }
  return report;
}

ExperimentReport run_experiment(std::string_view name, const ExperimentConfig& config) {
  if (name == "balance") return run_balance(config);
  if (name == "disruption") return run_disruption(config);
  if (name == "asl") return run_asl(config);
  if (name == "throughput") return run_throughput(config);
  if (name == "weighted") return run_weighted(config);
  if (name == "ars") return run_ars(config);
  if (name == "memory") return run_memory(config);
  throw InvalidConfig("unknown experiment '" + std::string(name) + "'");
}

} // namespace dxhash
