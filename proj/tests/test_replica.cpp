#include <doctest.h>

#include <cmath>
#include <cstring>
#include <set>
#include <string>
#include <vector>

#include "dxhash/replica.hpp"
#include "dxhash/workload.hpp"

using dxhash::DxHash;
using dxhash::FastDxHash;
using dxhash::ReplicaSpec;

namespace {

std::vector<std::byte> suffixed(std::string_view key, std::uint64_t suffix) {
  std::vector<std::byte> out(key.size() + 8);
  std::memcpy(out.data(), key.data(), key.size());
  for (int i = 0; i < 8; ++i) out[key.size() + i] = static_cast<std::byte>(suffix >> (8 * i));
  return out;
}

} // namespace

TEST_CASE("replica spec layout") {
  const auto spec = ReplicaSpec::for_cluster(1024);
  CHECK(spec.suffixes == std::array<std::uint64_t, 3>{1024, 2048, 4096});
  CHECK(spec.ring_size(0) == 1024);
  CHECK(spec.ring_size(1) == 2048);
  CHECK(spec.ring_size(2) == 4096);
  CHECK_THROWS_AS(ReplicaSpec::for_cluster(0), dxhash::InvalidArgument);
}

TEST_CASE("replica keys digest the key with a little-endian suffix") {
  const auto spec = ReplicaSpec::for_cluster(1000);
  const auto seeds = dxhash::replica_keys("object-17", spec);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(seeds[r] == dxhash::digest(suffixed("object-17", spec.suffixes[r])));
  }
  CHECK(seeds[0] != seeds[1]);
  CHECK(seeds[1] != seeds[2]);
  CHECK(seeds[0] != seeds[2]);
  CHECK(dxhash::replica_keys("object-17", spec) == seeds);
}

TEST_CASE("first replica equals a plain lookup of the suffixed key") {
  const DxHash h(500, 320);
  const auto spec = ReplicaSpec::for_cluster(500);
  for (int i = 0; i < 2000; ++i) {
    const std::string key = "k" + std::to_string(i);
    const auto p = dxhash::place_replicas(key, h, spec);
    const auto plain = h.get_node(std::span<const std::byte>(suffixed(key, 500)));
    REQUIRE(p.nodes[0] == plain.node);
    REQUIRE(p.search_lengths[0] == plain.search_length);
    for (const auto n : p.nodes) REQUIRE(h.is_working(n));
  }
}

TEST_CASE("mean search length per rank is 1, 2 and 4 on a full cluster") {
  const FastDxHash h(1024, 1024);
  const auto spec = ReplicaSpec::for_cluster(1024);
  dxhash::KeyStream keys(31);
  std::array<double, 3> sums{};
  const std::uint64_t n = 200'000;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto p = dxhash::place_replicas(keys.bytes(i), h, spec);
    for (std::size_t r = 0; r < 3; ++r) sums[r] += static_cast<double>(p.search_lengths[r]);
  }
  CHECK(sums[0] / n == 1.0);
  CHECK(sums[1] / n == doctest::Approx(2.0).epsilon(0.02));
  CHECK(sums[2] / n == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("replicas may share a node") {
  const DxHash h(2, 2);
  const auto spec = ReplicaSpec::for_cluster(2);
  bool collision = false;
  for (int i = 0; i < 100 && !collision; ++i) {
    const auto p = dxhash::place_replicas("c" + std::to_string(i), h, spec);
    collision = p.nodes[0] == p.nodes[1] || p.nodes[1] == p.nodes[2];
  }
  CHECK(collision);
}

TEST_CASE("rotation on scale-up") {
  const auto once = dxhash::rotate_on_scaleup(ReplicaSpec::for_cluster(1024));
  CHECK(once.base_size == 2048);
  CHECK(once.ring_size(0) == 2048);
  CHECK(once.ring_size(1) == 4096);
  CHECK(once.ring_size(2) == 8192);
  CHECK(once.suffixes == std::array<std::uint64_t, 3>{2048, 4096, 1024});
  const auto twice = dxhash::rotate_on_scaleup(once);
  CHECK(twice.base_size == 4096);
  CHECK(twice.suffixes == std::array<std::uint64_t, 3>{4096, 1024, 2048});
}

TEST_CASE("promoted replicas survive the doubling itself") {
  const FastDxHash before(256, 256);
  FastDxHash scaled = before;
  scaled.scale_up();
  FastDxHash joined = scaled;
  const auto newcomer = joined.add_node();
  const auto old_spec = ReplicaSpec::for_cluster(256);
  const auto new_spec = dxhash::rotate_on_scaleup(old_spec);
  dxhash::KeyStream keys(41);
  std::uint64_t demoted_moved = 0;
  const std::uint64_t n = 50'000;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto bytes = keys.bytes(i);
    const auto old_p = dxhash::place_replicas(bytes, before, old_spec);
    const auto mid_p = dxhash::place_replicas(bytes, scaled, new_spec);
    const auto new_p = dxhash::place_replicas(bytes, joined, new_spec);
    REQUIRE(mid_p.nodes[0] == old_p.nodes[1]);
    REQUIRE(mid_p.nodes[1] == old_p.nodes[2]);
    REQUIRE((new_p.nodes[0] == old_p.nodes[1] || new_p.nodes[0] == newcomer));
    REQUIRE((new_p.nodes[1] == old_p.nodes[2] || new_p.nodes[1] == newcomer));
    demoted_moved += new_p.nodes[2] != old_p.nodes[0];
  }
  // The demoted replica keeps its node only when its first probe lands in the
  // old range of an 8x ring.
  CHECK(static_cast<double>(demoted_moved) / n == doctest::Approx(0.875).epsilon(0.01));
}

TEST_CASE("no working node") {
  const DxHash h(std::vector<dxhash::NodeState>(4, dxhash::NodeState::failed));
  CHECK_THROWS_AS(dxhash::place_replicas("x", h, ReplicaSpec::for_cluster(4)),
                  dxhash::NoWorkingNode);
}
