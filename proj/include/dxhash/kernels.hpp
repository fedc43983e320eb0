#pragma once

// Bulk key-mapping kernels. Every kernel has a serial reference and an
// OpenMP version; both reduce only integers, so their results are identical
// for any thread count.

#include <array>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dxhash/lookup.hpp"
#include "dxhash/workload.hpp"

namespace dxhash::kernels {

/// Node chosen for each key of a stream, plus search-length sums.
struct Assignment {
  std::vector<NodeId> nodes;
  std::uint64_t probes = 0;
  std::uint64_t probes_squared = 0;
  std::uint64_t fallbacks = 0;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Sets the OpenMP team size for the parallel kernels; 0 keeps the default.
inline void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) {
    omp_set_num_threads(threads);
  }
#else
  (void)threads;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial {

/// `lookup` maps a Seed to a LookupOutcome.
template <class Lookup>
Assignment assign(const Lookup& lookup, const KeyStream& keys, std::uint64_t count) {
  Assignment out;
  out.nodes.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const LookupOutcome o = lookup(keys.key(i));
    out.nodes[i] = o.node;
    out.probes += o.search_length;
    out.probes_squared += o.search_length * o.search_length;
    out.fallbacks += o.fallback ? 1 : 0;
  }
  return out;
}

inline std::vector<std::uint64_t> histogram(std::span<const NodeId> nodes, std::size_t buckets) {
  std::vector<std::uint64_t> counts(buckets, 0);
  for (NodeId n : nodes) {
    ++counts[n];
  }
  return counts;
}

inline std::uint64_t count_changed(std::span<const NodeId> before,
                                   std::span<const NodeId> after) {
  std::uint64_t changed = 0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    changed += before[i] != after[i] ? 1 : 0;
  }
  return changed;
}

/// Sum of fn(i) over [0, count).
template <class Fn>
std::uint64_t sum(std::uint64_t count, const Fn& fn) {
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    total += fn(i);
  }
  return total;
}

} // namespace serial

namespace parallel {

template <class Lookup>
Assignment assign(const Lookup& lookup, const KeyStream& keys, std::uint64_t count) {
  Assignment out;
  out.nodes.resize(count);
  std::uint64_t probes = 0;
  std::uint64_t probes_squared = 0;
  std::uint64_t fallbacks = 0;
  std::exception_ptr error;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) reduction(+ : probes, probes_squared, fallbacks)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const LookupOutcome o = lookup(keys.key(static_cast<std::uint64_t>(i)));
      out.nodes[i] = o.node;
      probes += o.search_length;
      probes_squared += o.search_length * o.search_length;
      fallbacks += o.fallback ? 1 : 0;
    } catch (...) {
#pragma omp critical(dxhash_kernel_error)
      if (!error) {
        error = std::current_exception();
      }
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
  out.probes = probes;
  out.probes_squared = probes_squared;
  out.fallbacks = fallbacks;
  return out;
}

inline std::vector<std::uint64_t> histogram(std::span<const NodeId> nodes, std::size_t buckets) {
  std::vector<std::uint64_t> counts(buckets, 0);
  const auto n = static_cast<std::int64_t>(nodes.size());
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(buckets, 0);
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < n; ++i) {
      ++local[nodes[i]];
    }
#pragma omp critical(dxhash_histogram_merge)
    for (std::size_t b = 0; b < buckets; ++b) {
      counts[b] += local[b];
    }
  }
  return counts;
}

inline std::uint64_t count_changed(std::span<const NodeId> before,
                                   std::span<const NodeId> after) {
  std::uint64_t changed = 0;
  const auto n = static_cast<std::int64_t>(before.size());
#pragma omp parallel for schedule(static) reduction(+ : changed)
  for (std::int64_t i = 0; i < n; ++i) {
    changed += before[i] != after[i] ? 1 : 0;
  }
  return changed;
}

template <class Fn>
std::uint64_t sum(std::uint64_t count, const Fn& fn) {
  std::uint64_t total = 0;
  std::exception_ptr error;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) reduction(+ : total)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      total += fn(static_cast<std::uint64_t>(i));
    } catch (...) {
#pragma omp critical(dxhash_kernel_error)
      if (!error) {
        error = std::current_exception();
      }
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
  return total;
}

} // namespace parallel

} // namespace dxhash::kernels

namespace dxhash::kernels {

/// Per-bit population counts of fn(i) over [0, count); fn returns a mask
/// of at most Bits bits.
template <std::size_t Bits, class Fn>
std::array<std::uint64_t, Bits> tally_serial(std::uint64_t count, const Fn& fn) {
  std::array<std::uint64_t, Bits> totals{};
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint32_t mask = fn(i);
    for (std::size_t b = 0; b < Bits; ++b) {
      totals[b] += (mask >> b) & 1U;
    }
  }
  return totals;
}

template <std::size_t Bits, class Fn>
std::array<std::uint64_t, Bits> tally_parallel(std::uint64_t count, const Fn& fn) {
  std::array<std::uint64_t, Bits> totals{};
  std::exception_ptr error;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel
  {
    std::array<std::uint64_t, Bits> local{};
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        const std::uint32_t mask = fn(static_cast<std::uint64_t>(i));
        for (std::size_t b = 0; b < Bits; ++b) {
          local[b] += (mask >> b) & 1U;
        }
      } catch (...) {
#pragma omp critical(dxhash_kernel_error)
        if (!error) {
          error = std::current_exception();
        }
      }
    }
#pragma omp critical(dxhash_tally_merge)
    for (std::size_t b = 0; b < Bits; ++b) {
      totals[b] += local[b];
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
  return totals;
}

} // namespace dxhash::kernels
