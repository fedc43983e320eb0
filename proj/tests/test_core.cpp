#include <doctest.h>

#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "dxhash/dxhash.hpp"
#include "dxhash/workload.hpp"
#include "oracles.hpp"

using dxhash::DxHash;
using dxhash::FastDxHash;
using dxhash::NodeId;
using dxhash::NodeState;
using dxhash::Seed;

namespace {

constexpr NodeState W = NodeState::working;
constexpr NodeState F = NodeState::failed;

// Nodes 0, 1, 3, 5 working; 2, 4, 6, 7 failed.
std::vector<NodeState> half_failed() { return {W, W, F, W, F, W, F, F}; }

std::vector<NodeState> random_states(std::size_t a, Seed& rng, double p_working) {
  std::vector<NodeState> states(a);
  for (auto& s : states) {
    rng = dxhash::next(rng);
    s = dxhash::to_unit(rng) < p_working ? W : F;
  }
  return states;
}

std::vector<bool> as_bools(const std::vector<NodeState>& states) {
  std::vector<bool> out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) out[i] = states[i] == W;
  return out;
}

template <class H>
std::vector<NodeId> map_keys(const H& h, std::uint64_t n, std::uint64_t seed = 1) {
  dxhash::KeyStream keys(seed);
  std::vector<NodeId> out(n);
  for (std::uint64_t i = 0; i < n; ++i) out[i] = h.lookup(keys.key(i)).node;
  return out;
}

} // namespace

TEST_CASE("init") {
  SUBCASE("all working") {
    const DxHash h(std::vector<NodeState>(8, W));
    CHECK(h.failed_set().empty());
    CHECK(h.working_count() == 8);
  }
  SUBCASE("half-failed eight-slot cluster") {
    const DxHash h(half_failed());
    CHECK(std::vector<NodeId>(h.failed_set().begin(), h.failed_set().end()) ==
          std::vector<NodeId>{2, 4, 6, 7});
    CHECK(h.working_count() == 4);
    CHECK(h.stats() == dxhash::ClusterStats{8, 4, 4});
  }
  SUBCASE("all failed") {
    const DxHash h(std::vector<NodeState>(4, F));
    CHECK(h.working_count() == 0);
    CHECK_THROWS_AS(h.get_node("key"), dxhash::NoWorkingNode);
  }
  SUBCASE("empty") {
    CHECK_THROWS_AS(DxHash(std::vector<NodeState>{}), dxhash::InvalidArgument);
  }
}

TEST_CASE("add_node") {
  SUBCASE("recovers the head of the failed queue") {
    DxHash h(half_failed());
    CHECK(h.add_node() == 2);
    CHECK(h.is_working(2));
    CHECK(h.stats() == dxhash::ClusterStats{8, 5, 3});
  }
  SUBCASE("exhausts a single failed slot") {
    DxHash h(std::vector<NodeState>{W, F, W});
    CHECK(h.add_node() == 1);
    CHECK(h.failed_set().empty());
  }
  SUBCASE("full cluster") {
    DxHash h(4, 4);
    CHECK_THROWS_AS(h.add_node(), dxhash::ClusterFull);
  }
  SUBCASE("specific slot") {
    DxHash h(half_failed());
    h.add_node(6);
    CHECK(h.is_working(6));
    CHECK(std::vector<NodeId>(h.failed_set().begin(), h.failed_set().end()) ==
          std::vector<NodeId>{2, 4, 7});
    CHECK_THROWS_AS(h.add_node(NodeId{6}), dxhash::InvalidArgument);
    CHECK_THROWS_AS(h.add_node(NodeId{8}), dxhash::InvalidArgument);
    h.check_invariants();
  }
  SUBCASE("auto scale-up when full") {
    DxHash h(4, 4);
    CHECK(h.add_node_auto() == 4);
    CHECK(h.stats() == dxhash::ClusterStats{8, 5, 3});
  }
}

TEST_CASE("remove_node") {
  SUBCASE("remove then add returns the same id") {
    DxHash h(4, 4);
    h.remove_node(2);
    CHECK(h.add_node() == 2);
  }
  SUBCASE("errors") {
    DxHash h(8, 8);
    CHECK_THROWS_AS(h.remove_node(9), dxhash::InvalidArgument);
    h.remove_node(3);
    CHECK_THROWS_AS(h.remove_node(3), dxhash::AlreadyFailed);
    CHECK(h.failed_count() == 1);
  }
}

TEST_CASE("lookups with injected sequences") {
  DxHash h(half_failed());
  SUBCASE("first item already on a working node") {
    const auto o = h.lookup_sequence(oracle::Script({1}));
    CHECK(o.node == 1);
    CHECK(o.search_length == 1);
  }
  SUBCASE("three failed items before a working one") {
    const auto o = h.lookup_sequence(oracle::Script({7, 2, 6, 3}));
    CHECK(o.node == 3);
    CHECK(o.search_length == 4);
    CHECK_FALSE(o.fallback);
  }
  SUBCASE("join of node 2 then exit of node 1") {
    CHECK(h.add_node() == 2);
    CHECK(h.lookup_sequence(oracle::Script({7, 2, 6, 3})).node == 2);
    CHECK(h.lookup_sequence(oracle::Script({1, 2})).node == 1);
    h.remove_node(1);
    CHECK(h.lookup_sequence(oracle::Script({1, 2})).node == 2);
  }
}

TEST_CASE("lookup agrees with the brute-force oracle, fallback included") {
  Seed rng{17};
  dxhash::KeyStream keys(3);
  std::uint64_t fallbacks = 0;
  for (std::size_t a : {1U, 2U, 5U, 16U, 33U}) {
    for (double p : {0.05, 0.3, 0.9}) {
      auto states = random_states(a, rng, p);
      states[a - 1] = W;  // at least one working slot
      const DxHash h(states);
      const auto working = as_bools(states);
      for (std::uint64_t i = 0; i < 2000; ++i) {
        const Seed k = keys.key(i);
        const auto expected = oracle::first_working(k, working);
        REQUIRE(expected.has_value());
        const auto got = h.lookup(k);
        CHECK(got.node == expected->node);
        CHECK(got.search_length == expected->steps);
        CHECK(got.fallback == expected->fallback);
        fallbacks += got.fallback ? 1 : 0;
      }
    }
  }
  CHECK(fallbacks > 0);
}

TEST_CASE("search-length mean at 30% working") {
  const FastDxHash h = [] {
    std::vector<NodeState> s(1000, F);
    for (const NodeId id : dxhash::shuffled_ids(1000, 5)) {
      if (id < 300) s[id] = W;
    }
    return FastDxHash(s);
  }();
  dxhash::KeyStream keys(8);
  std::uint64_t total = 0;
  const std::uint64_t n = 1'000'000;
  for (std::uint64_t i = 0; i < n; ++i) total += h.lookup(keys.key(i)).search_length;
  CHECK(std::fabs(static_cast<double>(total) / n - 10.0 / 3.0) <= 0.05);
}

TEST_CASE("search-length law: mean a/w and variance a/w(a/w - 1)") {
  dxhash::KeyStream keys(21);
  const std::uint64_t n = 1'000'000;
  for (std::size_t w : {900U, 500U, 100U}) {
    CAPTURE(w);
    const FastDxHash h(1000, w);
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(h.lookup(keys.key(i)).search_length);
      sum += t;
      sum_sq += t * t;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    const double r = 1000.0 / static_cast<double>(w);
    CHECK(std::fabs(mean - r) / r <= 0.02);
    CHECK(std::fabs(var - r * (r - 1)) / (r * (r - 1)) <= 0.05);
  }
}

TEST_CASE("scale_up") {
  SUBCASE("full eight-node cluster doubles") {
    DxHash h(8, 8);
    h.scale_up();
    CHECK(h.stats() == dxhash::ClusterStats{16, 8, 8});
    for (NodeId id = 8; id < 16; ++id) CHECK_FALSE(h.is_working(id));
    CHECK(h.add_node() == 8);
    h.check_invariants();
  }
  SUBCASE("single node") {
    DxHash h(1, 1);
    h.scale_up();
    CHECK(h.size() == 2);
    CHECK_FALSE(h.is_working(1));
  }
  SUBCASE("half of the keys remap when a full 1024 cluster doubles") {
    FastDxHash h(1024, 1024);
    const auto before = map_keys(h, 1'000'000);
    h.scale_up();
    const auto after = map_keys(h, 1'000'000);
    std::uint64_t moved = 0;
    for (std::size_t i = 0; i < before.size(); ++i) moved += before[i] != after[i];
    CHECK(std::fabs(moved / 1e6 - 0.5) <= 0.01);
  }
}

TEST_CASE("scale_down") {
  SUBCASE("no working node in the upper half") {
    DxHash h(8, 4);
    h.scale_down();
    CHECK(h.size() == 4);
    CHECK(h.working_count() == 4);
    h.check_invariants();
  }
  SUBCASE("upper-half node is replaced by a freed low slot") {
    DxHash h(std::vector<NodeState>{W, W, W, F, F, F, W, F});
    h.scale_down();
    CHECK(h.size() == 4);
    CHECK(h.working_count() == 4);
    for (NodeId id = 0; id < 4; ++id) CHECK(h.is_working(id));
    CHECK(h.failed_set().empty());
    h.check_invariants();
  }
  SUBCASE("too many working nodes") {
    DxHash h(std::vector<NodeState>{W, W, W, F});
    CHECK_THROWS_AS(h.scale_down(), dxhash::CapacityExceeded);
    CHECK(h.size() == 4);
  }
  SUBCASE("single slot") {
    DxHash h(1, 1);
    CHECK_THROWS_AS(h.scale_down(), dxhash::InvalidArgument);
  }
  SUBCASE("advisory predicate") {
    CHECK(DxHash(16, 3).should_scale_down());
    CHECK_FALSE(DxHash(16, 4).should_scale_down());
    CHECK(DxHash(16, 7).should_scale_down(0.5));
  }
}

TEST_CASE("minimal disruption on random states") {
  Seed rng{2};
  const std::uint64_t n = 10'000;
  for (std::size_t a : {5U, 8U, 13U, 16U}) {
    for (int trial = 0; trial < 6; ++trial) {
      auto states = random_states(a, rng, 0.5);
      states[0] = W;
      states[a - 1] = F;
      DxHash h(states);
      const auto base = map_keys(h, n);

      // Removal of each working node other than the last one standing.
      for (NodeId r = 0; r < a; ++r) {
        if (!h.is_working(r) || h.working_count() == 1) continue;
        DxHash removed = h;
        removed.remove_node(r);
        const auto after = map_keys(removed, n);
        for (std::uint64_t i = 0; i < n; ++i) {
          if (base[i] != after[i]) REQUIRE(base[i] == r);
          if (base[i] == r) REQUIRE(after[i] != r);
        }
      }
      // Addition of each failed node.
      for (NodeId x = 0; x < a; ++x) {
        if (h.is_working(x)) continue;
        DxHash added = h;
        added.add_node(x);
        const auto after = map_keys(added, n);
        for (std::uint64_t i = 0; i < n; ++i) {
          if (base[i] != after[i]) REQUIRE(after[i] == x);
        }
      }
    }
  }
}

TEST_CASE("balance stays inside three binomial sigmas") {
  const std::uint64_t n = 1'000'000;
  dxhash::KeyStream keys(4);
  for (std::size_t w : {10U, 100U, 700U}) {
    const FastDxHash h(1024, w);
    std::vector<std::uint64_t> counts(w, 0);
    for (std::uint64_t i = 0; i < n; ++i) ++counts[h.lookup(keys.key(i)).node];
    CHECK(oracle::cv(counts) <= 3.0 * std::sqrt(static_cast<double>(w) / n));
  }
}

TEST_CASE("random operation sequences keep the failed set consistent") {
  DxHash h(std::vector<NodeState>(8, W));
  Seed rng{123};
  for (int op = 0; op < 100'000; ++op) {
    rng = dxhash::next(rng);
    switch (rng.value % 5) {
      case 0:
      case 1:
        if (h.failed_count() > 0) h.add_node(); else h.add_node_auto();
        break;
      case 2:
      case 3: {
        const auto id = static_cast<NodeId>(dxhash::to_index(dxhash::remix(rng), h.size()));
        if (h.is_working(id)) h.remove_node(id);
        break;
      }
      default:
        if (h.size() > 64) {
          if (h.working_count() <= h.size() / 2) h.scale_down();
        } else if (h.size() < 8) {
          h.scale_up();
        }
    }
    if (op % 97 == 0) h.check_invariants();
    REQUIRE(h.failed_count() + h.working_count() == h.size());
  }
  h.check_invariants();
}

TEST_CASE("independent instances agree and the byte array matches the bit array") {
  Seed rng{55};
  const auto states = random_states(777, rng, 0.4);
  const DxHash a(states);
  const DxHash b(states);
  const FastDxHash fast(states);
  const FastDxHash converted(a);
  CHECK(map_keys(a, 100'000) == map_keys(b, 100'000));
  CHECK(map_keys(a, 100'000) == map_keys(fast, 100'000));
  CHECK(map_keys(converted, 100'000) == map_keys(fast, 100'000));
  CHECK(a.node_states() == fast.node_states());
}

TEST_CASE("concurrent lookups on a shared instance") {
  const FastDxHash h(4096, 1500);
  const auto expected = map_keys(h, 50'000);
  std::vector<std::vector<NodeId>> results(4);
  std::vector<std::thread> threads;
  for (auto& r : results) {
    threads.emplace_back([&h, &r] { r = map_keys(h, 50'000); });
  }
  for (auto& t : threads) t.join();
  for (const auto& r : results) CHECK(r == expected);
}
