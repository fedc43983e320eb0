#include "dxhash/prg.hpp"

namespace dxhash {

namespace {

constexpr std::uint64_t kMurmurMul = 0xc6a4a7935bd1e995ULL;
constexpr int kMurmurShift = 47;
constexpr std::uint64_t kDigestSeed = 0x44784861736831ULL;

std::uint64_t load_le64(const std::byte* p) noexcept {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) {
    v = (v << 8) | std::to_integer<std::uint64_t>(p[i]);
  }
  return v;
}

} // namespace

Seed digest(std::span<const std::byte> key) noexcept {
  const std::size_t len = key.size();
  std::uint64_t h = kDigestSeed ^ (static_cast<std::uint64_t>(len) * kMurmurMul);

  const std::size_t blocks = len / 8;
  for (std::size_t i = 0; i < blocks; ++i) {
    std::uint64_t k = load_le64(key.data() + i * 8);
    k *= kMurmurMul;
    k ^= k >> kMurmurShift;
    k *= kMurmurMul;
    h ^= k;
    h *= kMurmurMul;
  }

  const std::byte* tail = key.data() + blocks * 8;
  switch (len & 7) {
    case 7: h ^= std::to_integer<std::uint64_t>(tail[6]) << 48; [[fallthrough]];
    case 6: h ^= std::to_integer<std::uint64_t>(tail[5]) << 40; [[fallthrough]];
    case 5: h ^= std::to_integer<std::uint64_t>(tail[4]) << 32; [[fallthrough]];
    case 4: h ^= std::to_integer<std::uint64_t>(tail[3]) << 24; [[fallthrough]];
    case 3: h ^= std::to_integer<std::uint64_t>(tail[2]) << 16; [[fallthrough]];
    case 2: h ^= std::to_integer<std::uint64_t>(tail[1]) << 8; [[fallthrough]];
    case 1:
      h ^= std::to_integer<std::uint64_t>(tail[0]);
      h *= kMurmurMul;
  }

  h ^= h >> kMurmurShift;
  h *= kMurmurMul;
  h ^= h >> kMurmurShift;
  return Seed{h};
}

} // namespace dxhash
