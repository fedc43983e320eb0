#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "dxhash/lookup.hpp"
#include "dxhash/prg.hpp"

namespace dxhash {

/// Reproducible key workload: key i is the 16 bytes LE64(seed) || LE64(i).
class KeyStream {
 public:
  static constexpr std::size_t kKeyBytes = 16;

  explicit KeyStream(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::array<std::byte, kKeyBytes> bytes(std::uint64_t index) const noexcept;
  Seed key(std::uint64_t index) const noexcept { return digest(bytes(index)); }

 private:
  std::uint64_t seed_;
};

/// Permutation of [0, n) by Fisher-Yates over the sequence of `seed`.
std::vector<NodeId> shuffled_ids(std::size_t n, std::uint64_t seed);

} // namespace dxhash
