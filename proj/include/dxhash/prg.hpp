#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace dxhash {

/// A 64-bit value threaded through the pseudo-random sequence of a key.
struct Seed {
  std::uint64_t value = 0;

  friend constexpr bool operator==(Seed, Seed) = default;
};

/// Digests an arbitrary byte key into a Seed (MurmurHash64A, little-endian
/// word reads, so the result is identical on every platform).
Seed digest(std::span<const std::byte> key) noexcept;

inline Seed digest(std::string_view key) noexcept {
  return digest(std::as_bytes(std::span<const char>(key.data(), key.size())));
}

/// One step of the sequence generator: a Weyl increment followed by the
/// Stafford "mix13" finalizer. A bijection on 64-bit values.
constexpr Seed next(Seed s) noexcept {
  std::uint64_t z = s.value + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return Seed{z ^ (z >> 31)};
}

/// Maps a seed onto [0, a) with a 64-bit modulo.
///
/// The modulo is exact for powers of two; otherwise the relative bias of any
/// bucket is at most a / 2^64, below 2^-32 for every a <= 2^32. Unlike a
/// multiply-shift reduction it satisfies `to_index(s, 2a) mod a ==
/// to_index(s, a)`, which is what keeps a doubled ring consistent with the
/// ring it grew from.
constexpr std::uint64_t to_index(Seed s, std::uint64_t a) noexcept {
  return s.value % a;
}

/// Top 53 bits of the seed as a double in [0, 1).
constexpr double to_unit(Seed s) noexcept {
  return static_cast<double>(s.value >> 11) * 0x1.0p-53;
}

/// Secondary mixer (murmur3 fmix64 over a salted input), used for the
/// acceptance hash so that it is decorrelated from next().
constexpr Seed remix(Seed s) noexcept {
  std::uint64_t z = s.value ^ 0x6a09e667f3bcc909ULL;
  z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
  z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
  return Seed{z ^ (z >> 33)};
}

/// The unit-interval hash H applied to a raw sequence item.
constexpr double unit_hash(Seed s) noexcept { return to_unit(remix(s)); }

/// Top 32 bits of H's output; compared against fixed-point weights.
constexpr std::uint32_t unit_hash32(Seed s) noexcept {
  return static_cast<std::uint32_t>(remix(s).value >> 32);
}

/// Iterates the sequence R(k), R^2(k), ... of a digested key.
class Sequence {
 public:
  constexpr explicit Sequence(Seed key) noexcept : state_(key) {}

  constexpr Seed operator()() noexcept {
    state_ = next(state_);
    return state_;
  }

 private:
  Seed state_;
};

} // namespace dxhash
