#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dxhash/dxhash.hpp"

namespace dxhash {

/// "DXH1" / "DXW1" magic followed by the slot count as little-endian u64.
inline constexpr std::size_t kSnapshotHeaderBytes = 12;

/// Encodes working/failed flags as "DXH1", u64 LE size, then ceil(size/8)
/// bytes of flags, LSB first within each byte.
std::vector<std::byte> encode_states(std::span<const NodeState> states);

/// Inverse of encode_states(). Throws FormatError on a bad magic, a length
/// mismatch, or set padding bits.
std::vector<NodeState> decode_states(std::span<const std::byte> bytes);

/// Encodes fixed-point weights as "DXW1", u64 LE size, then one u32 LE per
/// slot.
std::vector<std::byte> encode_weights(std::span<const std::uint32_t> weights);
std::vector<std::uint32_t> decode_weights(std::span<const std::byte> bytes);

template <class States>
std::vector<std::byte> save_snapshot(const BasicDxHash<States>& hash) {
  return encode_states(hash.node_states());
}

/// The failed queue of the restored instance is rebuilt in ascending order.
inline DxHash load_snapshot(std::span<const std::byte> bytes) {
  return DxHash(decode_states(bytes));
}

} // namespace dxhash
