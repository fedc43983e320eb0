#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "dxhash/lookup.hpp"
#include "dxhash/prg.hpp"

namespace dxhash {

/// Karger ring with virtual nodes. Each physical node owns `virtual_nodes`
/// 32-bit positions; a key belongs to the first position clockwise at or
/// after its own. Positions that collide are ordered by node id.
class HashRing {
 public:
  static constexpr std::size_t kDefaultVirtualNodes = 100;
  /// Per-position footprint used by the analytic memory model (three tree
  /// pointers, color and a 32-bit key/value pair).
  static constexpr std::size_t kAnalyticBytesPerPosition = 28;

  explicit HashRing(std::size_t virtual_nodes = kDefaultVirtualNodes);
  HashRing(std::span<const NodeId> nodes, std::size_t virtual_nodes = kDefaultVirtualNodes);

  /// Throws InvalidArgument if the node is already present.
  void add(NodeId node);
  /// Throws InvalidArgument if the node is absent.
  void remove(NodeId node);

  NodeId lookup(Seed key) const;
  NodeId lookup(std::string_view key) const { return lookup(digest(key)); }

  std::size_t physical_count() const noexcept { return members_.size(); }
  std::size_t position_count() const noexcept { return ring_.size(); }
  std::size_t virtual_nodes() const noexcept { return virtual_nodes_; }

  /// Sorted (position, node) pairs.
  std::vector<std::pair<std::uint32_t, NodeId>> positions() const;

  /// Ring position of a node's `replica`-th virtual node.
  static std::uint32_t position(NodeId node, std::size_t replica) noexcept;
  static std::uint32_t key_position(Seed key) noexcept {
    return static_cast<std::uint32_t>(key.value >> 32);
  }

  /// Rough in-memory size of this instance's tree.
  std::size_t estimated_bytes() const noexcept;

 private:
  std::size_t virtual_nodes_;
  // (position << 32) | node
  std::set<std::uint64_t> ring_;
  std::set<NodeId> members_;
};

} // namespace dxhash
