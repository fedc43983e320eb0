#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dxhash {

enum class NodeState : std::uint8_t { failed = 0, working = 1 };

/// Cluster state array with one bit per node.
class BitStateArray {
 public:
  BitStateArray() = default;
  explicit BitStateArray(std::size_t size) : words_((size + 63) / 64), size_(size) {}

  std::size_t size() const noexcept { return size_; }

  bool working(std::size_t id) const noexcept {
    return (words_[id >> 6] >> (id & 63)) & 1U;
  }

  void set(std::size_t id, bool working) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (id & 63);
    if (working) {
      words_[id >> 6] |= mask;
    } else {
      words_[id >> 6] &= ~mask;
    }
  }

  /// Grows or shrinks; new slots are failed.
  void resize(std::size_t size) {
    if (size < size_) {
      for (std::size_t id = size; id < size_ && id < words_.size() * 64; ++id) {
        set(id, false);
      }
    }
    words_.resize((size + 63) / 64);
    size_ = size;
  }

  /// Bytes needed to hold the bits themselves.
  std::size_t payload_bytes() const noexcept { return (size_ + 7) / 8; }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

/// Cluster state array with one byte per node, avoiding bit extraction on
/// the lookup path.
class ByteStateArray {
 public:
  ByteStateArray() = default;
  explicit ByteStateArray(std::size_t size) : bytes_(size, 0) {}

  std::size_t size() const noexcept { return bytes_.size(); }
  bool working(std::size_t id) const noexcept { return bytes_[id] != 0; }
  void set(std::size_t id, bool working) noexcept { bytes_[id] = working ? 1 : 0; }
  void resize(std::size_t size) { bytes_.resize(size, 0); }
  std::size_t payload_bytes() const noexcept { return bytes_.size(); }

 private:
  std::vector<std::uint8_t> bytes_;
};

} // namespace dxhash
