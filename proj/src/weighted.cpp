#include "dxhash/weighted.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dxhash {

Weight Weight::from_real(double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw InvalidArgument("weight " + std::to_string(w) + " outside [0, 1]");
  }
  return Weight(static_cast<std::uint32_t>(std::llround(w * kOneRaw)));
}

WeightedDxHash::WeightedDxHash(std::span<const Weight> weights)
    : weights_(weights.begin(), weights.end()) {
  if (weights_.empty()) {
    throw InvalidArgument("weight array must not be empty");
  }
  for (std::size_t id = 0; id < weights_.size(); ++id) {
    if (weights_[id].is_zero()) {
      failed_.push_back(static_cast<NodeId>(id));
    }
  }
}

namespace {

std::vector<Weight> to_fixed(std::span<const double> weights) {
  std::vector<Weight> out;
  out.reserve(weights.size());
  for (double w : weights) {
    out.push_back(Weight::from_real(w));
  }
  return out;
}

} // namespace

WeightedDxHash::WeightedDxHash(std::span<const double> weights)
    : WeightedDxHash(std::span<const Weight>(to_fixed(weights))) {}

Weight WeightedDxHash::weight(NodeId id) const {
  check_range(id);
  return weights_[id];
}

std::vector<std::uint32_t> WeightedDxHash::raw_weights() const {
  std::vector<std::uint32_t> out(weights_.size());
  std::transform(weights_.begin(), weights_.end(), out.begin(),
                 [](Weight w) { return w.raw(); });
  return out;
}

double WeightedDxHash::total_weight() const noexcept {
  double sum = 0.0;
  for (Weight w : weights_) {
    sum += w.value();
  }
  return sum;
}

void WeightedDxHash::set_weight(NodeId id, double w) { set_weight(id, Weight::from_real(w)); }

void WeightedDxHash::set_weight(NodeId id, Weight w) {
  check_range(id);
  const bool was_failed = weights_[id].is_zero();
  weights_[id] = w;
  if (was_failed && !w.is_zero()) {
    failed_.erase(std::find(failed_.begin(), failed_.end(), id));
  } else if (!was_failed && w.is_zero()) {
    failed_.push_back(id);
  }
}

void WeightedDxHash::check_invariants() const {
  std::vector<bool> queued(size(), false);
  for (NodeId id : failed_) {
    if (id >= size() || queued[id] || !weights_[id].is_zero()) {
      throw InvariantViolation("failed set disagrees with weights at node " +
                               std::to_string(id));
    }
    queued[id] = true;
  }
  const auto zeros = std::count_if(weights_.begin(), weights_.end(),
                                   [](Weight w) { return w.is_zero(); });
  if (static_cast<std::size_t>(zeros) != failed_.size()) {
    throw InvariantViolation("zero-weight nodes missing from the failed set");
  }
}

void WeightedDxHash::check_range(NodeId id) const {
  if (id >= size()) {
    throw InvalidArgument("node " + std::to_string(id) + " out of range [0, " +
                          std::to_string(size()) + ")");
  }
}

} // namespace dxhash
