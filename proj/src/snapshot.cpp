#include "dxhash/snapshot.hpp"

#include <string>

namespace dxhash {

namespace {

constexpr char kStatesMagic[4] = {'D', 'X', 'H', '1'};
constexpr char kWeightsMagic[4] = {'D', 'X', 'W', '1'};

void put_le(std::vector<std::byte>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    out.push_back(static_cast<std::byte>(v >> (8 * i)));
  }
}

std::uint64_t get_le(std::span<const std::byte> in, std::size_t offset, int bytes) {
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) {
    v = (v << 8) | std::to_integer<std::uint64_t>(in[offset + i]);
  }
  return v;
}

std::vector<std::byte> header(const char (&magic)[4], std::uint64_t size) {
  std::vector<std::byte> out;
  for (char c : magic) {
    out.push_back(static_cast<std::byte>(c));
  }
  put_le(out, size, 8);
  return out;
}

std::uint64_t read_header(std::span<const std::byte> in, const char (&magic)[4]) {
  if (in.size() < kSnapshotHeaderBytes) {
    throw FormatError("snapshot shorter than its header");
  }
  for (int i = 0; i < 4; ++i) {
    if (in[i] != static_cast<std::byte>(magic[i])) {
      throw FormatError(std::string("bad snapshot magic, expected ") +
                        std::string(magic, 4));
    }
  }
  const std::uint64_t size = get_le(in, 4, 8);
  if (size == 0) {
    throw FormatError("snapshot declares an empty cluster");
  }
  return size;
}

} // namespace

std::vector<std::byte> encode_states(std::span<const NodeState> states) {
  std::vector<std::byte> out = header(kStatesMagic, states.size());
  out.resize(kSnapshotHeaderBytes + (states.size() + 7) / 8, std::byte{0});
  for (std::size_t id = 0; id < states.size(); ++id) {
    if (states[id] == NodeState::working) {
      out[kSnapshotHeaderBytes + id / 8] |= static_cast<std::byte>(1U << (id % 8));
    }
  }
  return out;
}

std::vector<NodeState> decode_states(std::span<const std::byte> bytes) {
  const std::uint64_t size = read_header(bytes, kStatesMagic);
  if (bytes.size() - kSnapshotHeaderBytes != (size + 7) / 8) {
    throw FormatError("state snapshot length does not match its declared size");
  }
  std::vector<NodeState> states(size, NodeState::failed);
  for (std::uint64_t id = 0; id < size; ++id) {
    const auto byte = std::to_integer<unsigned>(bytes[kSnapshotHeaderBytes + id / 8]);
    if ((byte >> (id % 8)) & 1U) {
      states[id] = NodeState::working;
    }
  }
  if (size % 8 != 0) {
    const auto last = std::to_integer<unsigned>(bytes.back());
    if (last >> (size % 8)) {
      throw FormatError("state snapshot has padding bits set");
    }
  }
  return states;
}

std::vector<std::byte> encode_weights(std::span<const std::uint32_t> weights) {
  std::vector<std::byte> out = header(kWeightsMagic, weights.size());
  out.reserve(kSnapshotHeaderBytes + 4 * weights.size());
  for (std::uint32_t w : weights) {
    put_le(out, w, 4);
  }
  return out;
}

std::vector<std::uint32_t> decode_weights(std::span<const std::byte> bytes) {
  const std::uint64_t size = read_header(bytes, kWeightsMagic);
  if ((bytes.size() - kSnapshotHeaderBytes) / 4 != size ||
      (bytes.size() - kSnapshotHeaderBytes) % 4 != 0) {
    throw FormatError("weight snapshot length does not match its declared size");
  }
  std::vector<std::uint32_t> weights(size);
  for (std::uint64_t i = 0; i < size; ++i) {
    weights[i] = static_cast<std::uint32_t>(get_le(bytes, kSnapshotHeaderBytes + 4 * i, 4));
  }
  return weights;
}

} // namespace dxhash
