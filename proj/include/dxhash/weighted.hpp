#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <string_view>
#include <vector>

#include "dxhash/dxhash.hpp"
#include "dxhash/lookup.hpp"
#include "dxhash/prg.hpp"

namespace dxhash {

/// A node weight in [0, 1], stored as a 32-bit fraction of 2^32 - 1.
///
/// An item is accepted when the top 32 bits of its hash fall below the raw
/// value, so acceptance is exact integer arithmetic. The full weight accepts
/// every item.
class Weight {
 public:
  static constexpr std::uint32_t kOneRaw = 0xFFFFFFFFU;

  constexpr Weight() = default;
  static constexpr Weight from_raw(std::uint32_t raw) noexcept { return Weight(raw); }

  /// Rounds to the nearest representable weight. Throws InvalidArgument
  /// outside [0, 1].
  static Weight from_real(double w);

  constexpr std::uint32_t raw() const noexcept { return raw_; }
  double value() const noexcept { return static_cast<double>(raw_) / kOneRaw; }
  constexpr bool is_zero() const noexcept { return raw_ == 0; }

  constexpr bool accepts(std::uint32_t hash32) const noexcept {
    return raw_ == kOneRaw || hash32 < raw_;
  }

  friend constexpr bool operator==(Weight, Weight) = default;

 private:
  constexpr explicit Weight(std::uint32_t raw) noexcept : raw_(raw) {}
  std::uint32_t raw_ = 0;
};

/// DxHash whose state array holds weights: a sequence item landing on slot b
/// is accepted only if H(item) < weight[b]. Zero weight means failed.
class WeightedDxHash {
 public:
  /// Hash evaluations per probe: one sequence step and one acceptance hash.
  static constexpr int kHashesPerProbe = 2;

  explicit WeightedDxHash(std::span<const double> weights);
  explicit WeightedDxHash(std::span<const Weight> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  std::size_t working_count() const noexcept { return weights_.size() - failed_.size(); }
  ClusterStats stats() const noexcept {
    return {size(), working_count(), failed_.size()};
  }
  const std::deque<NodeId>& failed_set() const noexcept { return failed_; }

  Weight weight(NodeId id) const;
  std::span<const Weight> weights() const noexcept { return weights_; }
  std::vector<std::uint32_t> raw_weights() const;
  /// Sum of the stored (rounded) weights.
  double total_weight() const noexcept;

  /// Throws InvalidArgument for an out-of-range id or a weight outside
  /// [0, 1]. Moving to or from zero updates the failed queue.
  void set_weight(NodeId id, double w);
  void set_weight(NodeId id, Weight w);

  LookupOutcome get_node(std::span<const std::byte> key) const { return lookup(digest(key)); }
  LookupOutcome get_node(std::string_view key) const { return lookup(digest(key)); }
  LookupOutcome lookup(Seed key) const { return lookup_sequence(Sequence(key)); }

  template <class Source>
  LookupOutcome lookup_sequence(Source&& source) const {
    if (failed_.size() == weights_.size()) {
      throw NoWorkingNode();
    }
    return detail::search(
        source, size(),
        [this](Seed item, std::uint64_t index) {
          const std::uint32_t h = unit_hash32(item);
          return weights_[index].accepts(h);
        },
        [this](std::uint64_t index) { return !weights_[index].is_zero(); });
  }

  void check_invariants() const;

 private:
  void check_range(NodeId id) const;

  std::vector<Weight> weights_;
  std::deque<NodeId> failed_;
};

} // namespace dxhash
