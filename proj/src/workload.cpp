#include "dxhash/workload.hpp"

#include <numeric>
#include <utility>

namespace dxhash {

std::array<std::byte, KeyStream::kKeyBytes> KeyStream::bytes(std::uint64_t index) const noexcept {
  std::array<std::byte, kKeyBytes> out;
  for (int i = 0; i < 8; ++i) {
    out[i] = static_cast<std::byte>(seed_ >> (8 * i));
    out[8 + i] = static_cast<std::byte>(index >> (8 * i));
  }
  return out;
}

std::vector<NodeId> shuffled_ids(std::size_t n, std::uint64_t seed) {
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), NodeId{0});
  Sequence sequence(Seed{seed ^ 0x5eed5eed5eed5eedULL});
  for (std::size_t i = n; i > 1; --i) {
    const std::uint64_t j = to_index(sequence(), i);
    std::swap(ids[i - 1], ids[j]);
  }
  return ids;
}

} // namespace dxhash
