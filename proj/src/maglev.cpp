#include "dxhash/maglev.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <set>
#include <string>

#include "dxhash/errors.hpp"

namespace dxhash {

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) {
    return false;
  }
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      return false;
    }
  }
  return true;
}

std::uint64_t prev_prime(std::uint64_t n) {
  if (n < 2) {
    throw InvalidArgument("no prime below 2");
  }
  while (!is_prime(n)) {
    --n;
  }
  return n;
}

std::uint64_t MaglevTable::default_table_size(std::size_t nodes) {
  return prev_prime(std::max<std::uint64_t>(2, 100 * static_cast<std::uint64_t>(nodes)));
}

namespace {

std::uint64_t node_hash(NodeId node, std::uint8_t salt) noexcept {
  std::array<std::byte, 5> bytes;
  for (int i = 0; i < 4; ++i) {
    bytes[i] = static_cast<std::byte>(node >> (8 * i));
  }
  bytes[4] = static_cast<std::byte>(salt);
  return digest(bytes).value;
}

} // namespace

MaglevTable::MaglevTable(std::span<const NodeId> nodes, std::uint64_t table_size)
    : table_size_(table_size), node_count_(nodes.size()) {
  if (!is_prime(table_size)) {
    throw InvalidArgument("maglev table size " + std::to_string(table_size) + " is not prime");
  }
  if (std::set<NodeId>(nodes.begin(), nodes.end()).size() != nodes.size()) {
    throw InvalidArgument("maglev node list has duplicates");
  }
  if (nodes.empty()) {
    return;
  }

  constexpr NodeId kEmpty = std::numeric_limits<NodeId>::max();
  entries_.assign(table_size, kEmpty);

  const std::size_t n = nodes.size();
  std::vector<std::uint64_t> offset(n);
  std::vector<std::uint64_t> skip(n);
  std::vector<std::uint64_t> next(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    offset[i] = node_hash(nodes[i], 0) % table_size;
    skip[i] = node_hash(nodes[i], 1) % (table_size - 1) + 1;
  }

  std::uint64_t filled = 0;
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t slot = (offset[i] + next[i] * skip[i]) % table_size;
      while (entries_[slot] != kEmpty) {
        ++next[i];
        slot = (offset[i] + next[i] * skip[i]) % table_size;
      }
      entries_[slot] = nodes[i];
      ++next[i];
      if (++filled == table_size) {
        return;
      }
    }
  }
}

NodeId MaglevTable::lookup(Seed key) const {
  if (entries_.empty()) {
    throw NoWorkingNode();
  }
  return entries_[key.value % table_size_];
}

} // namespace dxhash
