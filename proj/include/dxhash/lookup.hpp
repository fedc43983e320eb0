#pragma once

#include <cstdint>

#include "dxhash/errors.hpp"
#include "dxhash/prg.hpp"

namespace dxhash {

using NodeId = std::uint32_t;

/// Result of resolving one key.
struct LookupOutcome {
  NodeId node = 0;
  /// Sequence items drawn before a node accepted the key.
  std::uint64_t search_length = 0;
  /// True when the probe cap was hit and the node came from a linear scan.
  bool fallback = false;

  friend bool operator==(const LookupOutcome&, const LookupOutcome&) = default;
};

namespace detail {

/// Draws items from `source` until `accept(item, index)` holds for the index
/// the item maps to in [0, ring). After 2 * ring rejected items the search
/// gives up on the sequence and scans ascending (wrapping) from the index of
/// the last item for the first slot with `reachable(index)`.
template <class Source, class Accept, class Reachable>
LookupOutcome search(Source&& source, std::uint64_t ring, Accept&& accept,
                     Reachable&& reachable) {
  const std::uint64_t cap = 2 * ring;
  Seed item{};
  for (std::uint64_t i = 1; i <= cap; ++i) {
    item = source();
    const std::uint64_t index = to_index(item, ring);
    if (accept(item, index)) {
      return {static_cast<NodeId>(index), i, false};
    }
  }
  const std::uint64_t start = to_index(item, ring);
  for (std::uint64_t j = 0; j < ring; ++j) {
    std::uint64_t index = start + j;
    if (index >= ring) {
      index -= ring;
    }
    if (reachable(index)) {
      return {static_cast<NodeId>(index), cap, true};
    }
  }
  throw NoWorkingNode();
}

} // namespace detail

} // namespace dxhash
