#pragma once

#include <cstdint>

#include "dxhash/prg.hpp"

namespace dxhash {

/// Jump consistent hash (Lamping & Veach): bucket in [0, buckets).
/// `buckets` must be >= 1; throws InvalidArgument otherwise.
std::uint32_t jump_consistent_hash(std::uint64_t key, std::uint32_t buckets);

inline std::uint32_t jump_lookup(Seed key, std::uint32_t buckets) {
  return jump_consistent_hash(key.value, buckets);
}

} // namespace dxhash
