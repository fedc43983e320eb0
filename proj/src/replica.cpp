#include "dxhash/replica.hpp"

#include <vector>

namespace dxhash {

ReplicaSpec ReplicaSpec::for_cluster(std::uint64_t base_size) {
  if (base_size == 0) {
    throw InvalidArgument("replica base size must be positive");
  }
  ReplicaSpec spec;
  spec.base_size = base_size;
  for (std::size_t rank = 0; rank < kReplicaCount; ++rank) {
    spec.suffixes[rank] = kMultipliers[rank] * base_size;
  }
  return spec;
}

std::array<Seed, kReplicaCount> replica_keys(std::span<const std::byte> key,
                                             const ReplicaSpec& spec) {
  std::vector<std::byte> buffer(key.begin(), key.end());
  buffer.resize(key.size() + 8);
  std::array<Seed, kReplicaCount> seeds;
  for (std::size_t rank = 0; rank < kReplicaCount; ++rank) {
    for (int i = 0; i < 8; ++i) {
      buffer[key.size() + i] = static_cast<std::byte>(spec.suffixes[rank] >> (8 * i));
    }
    seeds[rank] = digest(buffer);
  }
  return seeds;
}

ReplicaSpec rotate_on_scaleup(const ReplicaSpec& spec) {
  ReplicaSpec rotated;
  rotated.base_size = 2 * spec.base_size;
  rotated.suffixes = {spec.suffixes[1], spec.suffixes[2], spec.suffixes[0]};
  return rotated;
}

} // namespace dxhash
