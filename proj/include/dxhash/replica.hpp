#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "dxhash/dxhash.hpp"
#include "dxhash/lookup.hpp"
#include "dxhash/prg.hpp"

namespace dxhash {

inline constexpr std::size_t kReplicaCount = 3;

/// Three replicas per key, resolved over rings of 1x, 2x and 4x `base_size`.
///
/// Each rank also carries the suffix its key is digested with. A fresh spec
/// uses the ring sizes themselves as suffixes. On a cluster doubling the
/// suffixes rotate one rank up and the old first-rank suffix becomes the
/// third rank, now resolved over 8x the old size; ring sizes always stay
/// (1, 2, 4) x base_size.
struct ReplicaSpec {
  static constexpr std::array<std::uint64_t, kReplicaCount> kMultipliers{1, 2, 4};

  std::uint64_t base_size = 1;
  std::array<std::uint64_t, kReplicaCount> suffixes{1, 2, 4};

  /// Spec for a cluster of `base_size` slots. Throws InvalidArgument on 0.
  static ReplicaSpec for_cluster(std::uint64_t base_size);

  std::uint64_t ring_size(std::size_t rank) const noexcept {
    return kMultipliers[rank] * base_size;
  }

  friend bool operator==(const ReplicaSpec&, const ReplicaSpec&) = default;
};

struct ReplicaPlacement {
  std::array<NodeId, kReplicaCount> nodes{};
  std::array<std::uint64_t, kReplicaCount> search_lengths{};

  friend bool operator==(const ReplicaPlacement&, const ReplicaPlacement&) = default;
};

/// digest(key || u64 LE suffix) for each rank.
std::array<Seed, kReplicaCount> replica_keys(std::span<const std::byte> key,
                                             const ReplicaSpec& spec);

inline std::array<Seed, kReplicaCount> replica_keys(std::string_view key,
                                                    const ReplicaSpec& spec) {
  return replica_keys(std::as_bytes(std::span<const char>(key.data(), key.size())), spec);
}

/// Spec after the cluster doubled from spec.base_size.
ReplicaSpec rotate_on_scaleup(const ReplicaSpec& spec);

/// Resolves one replica over a virtual ring of `ring` slots in which every
/// slot beyond the real cluster, or failed in it, counts as failed. The probe
/// cap is 2 * ring.
template <class States>
LookupOutcome resolve_on_ring(Seed key, std::uint64_t ring, const BasicDxHash<States>& cluster) {
  if (cluster.working_count() == 0) {
    throw NoWorkingNode();
  }
  const std::uint64_t real = cluster.size();
  const States& states = cluster.states();
  auto working = [&](std::uint64_t index) { return index < real && states.working(index); };
  return detail::search(
      Sequence(key), ring, [&](Seed, std::uint64_t index) { return working(index); }, working);
}

/// Places the three replicas of `key`. Replicas may share a node.
template <class States>
ReplicaPlacement place_replicas(std::span<const std::byte> key,
                                const BasicDxHash<States>& cluster, const ReplicaSpec& spec) {
  const auto seeds = replica_keys(key, spec);
  ReplicaPlacement placement;
  for (std::size_t rank = 0; rank < kReplicaCount; ++rank) {
    const LookupOutcome outcome = resolve_on_ring(seeds[rank], spec.ring_size(rank), cluster);
    placement.nodes[rank] = outcome.node;
    placement.search_lengths[rank] = outcome.search_length;
  }
  return placement;
}

template <class States>
ReplicaPlacement place_replicas(std::string_view key, const BasicDxHash<States>& cluster,
                                const ReplicaSpec& spec) {
  return place_replicas(std::as_bytes(std::span<const char>(key.data(), key.size())), cluster,
                        spec);
}

} // namespace dxhash
