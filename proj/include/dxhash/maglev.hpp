#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dxhash/lookup.hpp"
#include "dxhash/prg.hpp"

namespace dxhash {

bool is_prime(std::uint64_t n) noexcept;
/// Largest prime <= n; n must be >= 2.
std::uint64_t prev_prime(std::uint64_t n);

/// Maglev lookup table built by the offset/skip permutation fill.
class MaglevTable {
 public:
  /// Table size giving ~100 entries per node: the largest prime <= 100 * nodes.
  static std::uint64_t default_table_size(std::size_t nodes);

  /// Throws InvalidArgument for a non-prime size or duplicate nodes. An
  /// empty node list yields an empty table whose lookups fail.
  MaglevTable(std::span<const NodeId> nodes, std::uint64_t table_size);

  NodeId lookup(Seed key) const;
  NodeId lookup(std::string_view key) const { return lookup(digest(key)); }

  std::uint64_t table_size() const noexcept { return table_size_; }
  std::span<const NodeId> entries() const noexcept { return entries_; }
  std::size_t node_count() const noexcept { return node_count_; }

  /// Bytes taken by the entries.
  std::size_t memory_bytes() const noexcept { return entries_.size() * sizeof(NodeId); }

 private:
  std::uint64_t table_size_;
  std::size_t node_count_ = 0;
  std::vector<NodeId> entries_;
};

} // namespace dxhash
