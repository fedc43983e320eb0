#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dxhash/errors.hpp"
#include "dxhash/lookup.hpp"
#include "dxhash/prg.hpp"
#include "dxhash/state_array.hpp"

namespace dxhash {

struct ClusterStats {
  std::size_t size = 0;     ///< slots in the state array
  std::size_t working = 0;
  std::size_t failed = 0;

  friend bool operator==(const ClusterStats&, const ClusterStats&) = default;
};

/// Consistent hash over a cluster state array.
///
/// A key is served by the first item of its pseudo-random sequence that lands
/// on a working slot. Failed slots are kept in a FIFO so that joins recover
/// them in a deterministic order; when the FIFO is empty the array doubles.
///
/// Lookups are const and may run concurrently. Mutations need exclusive
/// access with respect to lookups and to each other.
template <class States>
class BasicDxHash {
 public:
  explicit BasicDxHash(std::span<const NodeState> states) {
    if (states.empty()) {
      throw InvalidArgument("cluster state array must not be empty");
    }
    states_ = States(states.size());
    for (std::size_t id = 0; id < states.size(); ++id) {
      if (states[id] == NodeState::working) {
        states_.set(id, true);
        ++working_;
      } else {
        failed_.push_back(static_cast<NodeId>(id));
      }
    }
  }

  /// `size` slots with [0, working) working.
  BasicDxHash(std::size_t size, std::size_t working)
      : BasicDxHash(make_prefix(size, working)) {}

  template <class Other>
  explicit BasicDxHash(const BasicDxHash<Other>& other)
      : states_(other.size()),
        failed_(other.failed_set()),
        working_(other.working_count()) {
    for (std::size_t id = 0; id < other.size(); ++id) {
      states_.set(id, other.is_working(static_cast<NodeId>(id)));
    }
  }

  std::size_t size() const noexcept { return states_.size(); }
  std::size_t working_count() const noexcept { return working_; }
  std::size_t failed_count() const noexcept { return failed_.size(); }

  ClusterStats stats() const noexcept {
    return {size(), working_, failed_.size()};
  }

  bool is_working(NodeId id) const {
    check_range(id);
    return states_.working(id);
  }

  const std::deque<NodeId>& failed_set() const noexcept { return failed_; }
  const States& states() const noexcept { return states_; }

  std::vector<NodeState> node_states() const {
    std::vector<NodeState> out(size());
    for (std::size_t id = 0; id < size(); ++id) {
      out[id] = states_.working(id) ? NodeState::working : NodeState::failed;
    }
    return out;
  }

  /// Recovers the failed slot at the head of the FIFO.
  NodeId add_node() {
    if (failed_.empty()) {
      throw ClusterFull();
    }
    const NodeId id = failed_.front();
    failed_.pop_front();
    states_.set(id, true);
    ++working_;
    return id;
  }

  /// Recovers a specific failed slot.
  void add_node(NodeId id) {
    check_range(id);
    if (states_.working(id)) {
      throw InvalidArgument("node " + std::to_string(id) + " is already working");
    }
    failed_.erase(std::find(failed_.begin(), failed_.end(), id));
    states_.set(id, true);
    ++working_;
  }

  /// add_node(), doubling the array first when no failed slot remains.
  NodeId add_node_auto() {
    if (failed_.empty()) {
      scale_up();
    }
    return add_node();
  }

  void remove_node(NodeId id) {
    check_range(id);
    if (!states_.working(id)) {
      throw AlreadyFailed(id);
    }
    states_.set(id, false);
    failed_.push_back(id);
    --working_;
  }

  LookupOutcome get_node(std::span<const std::byte> key) const {
    return lookup(digest(key));
  }

  LookupOutcome get_node(std::string_view key) const { return lookup(digest(key)); }

  /// Resolves an already digested key.
  LookupOutcome lookup(Seed key) const {
    return lookup_sequence(Sequence(key));
  }

  /// Resolves the key whose sequence items are produced by `source`.
  template <class Source>
  LookupOutcome lookup_sequence(Source&& source) const {
    if (working_ == 0) {
      throw NoWorkingNode();
    }
    auto working = [this](std::uint64_t index) { return states_.working(index); };
    return detail::search(
        source, size(), [&](Seed, std::uint64_t index) { return working(index); },
        working);
  }

  /// Doubles the array; the new upper half is failed and queued ascending.
  void scale_up() {
    const std::size_t old_size = size();
    if (old_size > (std::size_t{1} << 31)) {
      throw CapacityExceeded("scale_up would exceed 2^32 node slots");
    }
    states_.resize(2 * old_size);
    for (std::size_t id = old_size; id < 2 * old_size; ++id) {
      failed_.push_back(static_cast<NodeId>(id));
    }
  }

  /// Halves the array: working slots in the upper half are removed, the
  /// upper half is dropped from the failed queue, and as many slots as were
  /// removed are recovered from the queue.
  void scale_down() {
    if (size() < 2) {
      throw InvalidArgument("scale_down needs at least two slots");
    }
    const std::size_t new_size = size() / 2;
    if (working_ > new_size) {
      throw CapacityExceeded(std::to_string(working_) + " working nodes do not fit in " +
                             std::to_string(new_size) + " slots");
    }
    std::size_t removed = 0;
    for (std::size_t id = new_size; id < size(); ++id) {
      if (states_.working(id)) {
        remove_node(static_cast<NodeId>(id));
        ++removed;
      }
    }
    std::erase_if(failed_, [new_size](NodeId id) { return id >= new_size; });
    states_.resize(new_size);
    for (std::size_t i = 0; i < removed; ++i) {
      add_node();
    }
  }

  /// Advisory only; scale_down() is never triggered automatically.
  bool should_scale_down(double threshold = 0.25) const noexcept {
    return static_cast<double>(working_) < threshold * static_cast<double>(size());
  }

  /// Throws InvariantViolation if the failed queue and the state array
  /// disagree.
  void check_invariants() const {
    std::vector<bool> queued(size(), false);
    for (NodeId id : failed_) {
      if (id >= size()) {
        throw InvariantViolation("failed set holds out-of-range id " + std::to_string(id));
      }
      if (queued[id]) {
        throw InvariantViolation("failed set holds " + std::to_string(id) + " twice");
      }
      if (states_.working(id)) {
        throw InvariantViolation("failed set holds working node " + std::to_string(id));
      }
      queued[id] = true;
    }
    std::size_t working = 0;
    for (std::size_t id = 0; id < size(); ++id) {
      working += states_.working(id) ? 1 : 0;
    }
    if (working != working_ || working + failed_.size() != size()) {
      throw InvariantViolation("working count disagrees with the state array");
    }
  }

 private:
  static std::vector<NodeState> make_prefix(std::size_t size, std::size_t working) {
    if (working > size) {
      throw InvalidArgument("working count exceeds cluster size");
    }
    std::vector<NodeState> states(size, NodeState::failed);
    std::fill_n(states.begin(), working, NodeState::working);
    return states;
  }

  void check_range(NodeId id) const {
    if (id >= size()) {
      throw InvalidArgument("node " + std::to_string(id) + " out of range [0, " +
                            std::to_string(size()) + ")");
    }
  }

  States states_;
  std::deque<NodeId> failed_;
  std::size_t working_ = 0;
};

/// Compact representation: one bit per slot.
using DxHash = BasicDxHash<BitStateArray>;
/// Hot-path representation: one byte per slot.
using FastDxHash = BasicDxHash<ByteStateArray>;

extern template class BasicDxHash<BitStateArray>;
extern template class BasicDxHash<ByteStateArray>;

} // namespace dxhash
