#include "dxhash/jump.hpp"

#include "dxhash/errors.hpp"

namespace dxhash {

std::uint32_t jump_consistent_hash(std::uint64_t key, std::uint32_t buckets) {
  if (buckets == 0) {
    throw InvalidArgument("jump hash needs at least one bucket");
  }
  std::int64_t b = -1;
  std::int64_t j = 0;
  while (j < static_cast<std::int64_t>(buckets)) {
    b = j;
    key = key * 2862933555777941757ULL + 1;
    j = static_cast<std::int64_t>(static_cast<double>(b + 1) *
                                  (static_cast<double>(1LL << 31) /
                                   static_cast<double>((key >> 33) + 1)));
  }
  return static_cast<std::uint32_t>(b);
}

} // namespace dxhash
