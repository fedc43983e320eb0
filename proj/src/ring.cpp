#include "dxhash/ring.hpp"

#include <array>
#include <string>

#include "dxhash/errors.hpp"

namespace dxhash {

namespace {

std::uint64_t pack(std::uint32_t position, NodeId node) noexcept {
  return (static_cast<std::uint64_t>(position) << 32) | node;
}

} // namespace

HashRing::HashRing(std::size_t virtual_nodes) : virtual_nodes_(virtual_nodes) {
  if (virtual_nodes == 0) {
    throw InvalidArgument("ring needs at least one virtual node per physical node");
  }
}

HashRing::HashRing(std::span<const NodeId> nodes, std::size_t virtual_nodes)
    : HashRing(virtual_nodes) {
  for (NodeId node : nodes) {
    add(node);
  }
}

std::uint32_t HashRing::position(NodeId node, std::size_t replica) noexcept {
  std::array<std::byte, 8> bytes;
  for (int i = 0; i < 4; ++i) {
    bytes[i] = static_cast<std::byte>(node >> (8 * i));
    bytes[4 + i] = static_cast<std::byte>(static_cast<std::uint32_t>(replica) >> (8 * i));
  }
  return static_cast<std::uint32_t>(digest(bytes).value >> 32);
}

void HashRing::add(NodeId node) {
  if (!members_.insert(node).second) {
    throw InvalidArgument("node " + std::to_string(node) + " is already on the ring");
  }
  for (std::size_t r = 0; r < virtual_nodes_; ++r) {
    ring_.insert(pack(position(node, r), node));
  }
}

void HashRing::remove(NodeId node) {
  if (members_.erase(node) == 0) {
    throw InvalidArgument("node " + std::to_string(node) + " is not on the ring");
  }
  for (std::size_t r = 0; r < virtual_nodes_; ++r) {
    ring_.erase(pack(position(node, r), node));
  }
}

NodeId HashRing::lookup(Seed key) const {
  if (ring_.empty()) {
    throw NoWorkingNode();
  }
  auto it = ring_.lower_bound(static_cast<std::uint64_t>(key_position(key)) << 32);
  if (it == ring_.end()) {
    it = ring_.begin();
  }
  return static_cast<NodeId>(*it & 0xFFFFFFFFU);
}

std::vector<std::pair<std::uint32_t, NodeId>> HashRing::positions() const {
  std::vector<std::pair<std::uint32_t, NodeId>> out;
  out.reserve(ring_.size());
  for (std::uint64_t packed : ring_) {
    out.emplace_back(static_cast<std::uint32_t>(packed >> 32),
                     static_cast<NodeId>(packed & 0xFFFFFFFFU));
  }
  return out;
}

std::size_t HashRing::estimated_bytes() const noexcept {
  // libstdc++ tree node: color plus three pointers, then the value.
  constexpr std::size_t node_bytes = 4 * sizeof(void*) + sizeof(std::uint64_t);
  return ring_.size() * node_bytes + members_.size() * (4 * sizeof(void*) + sizeof(NodeId));
}

} // namespace dxhash
