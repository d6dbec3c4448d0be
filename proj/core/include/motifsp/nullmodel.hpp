#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "motifsp/census.hpp"
#include "motifsp/graph.hpp"

namespace motifsp {

class WorkerPool;

struct SwapOutcome {
  Graph graph;
  std::size_t attempted = 0;
  std::size_t skipped = 0;  ///< attempts rejected for creating a loop or duplicate
};

/// Degree-preserving randomization by q attempted double edge swaps.
///
/// Each attempt picks two distinct edges uniformly, orients them at random,
/// and replaces (a,b),(c,d) with (a,d),(c,b) unless that creates a self-loop
/// or an existing edge. Graphs with fewer than two edges are returned as-is.
SwapOutcome double_edge_swap(const Graph& g, std::size_t q, std::uint64_t rng_seed);

struct NullConfig {
  std::size_t replicates = 500;  ///< T
  double swaps_factor = 10.0;    ///< Q = swaps_factor * m attempted swaps
  std::uint64_t base_seed = 42;
  double cap = 1e6;              ///< |z| substitute when the null std is zero

  std::size_t swaps_for(const Graph& g) const;
};

/// Per-pattern moments of the null distribution (population std).
struct NullStats {
  std::array<double, kNumPatterns> mean{};
  std::array<double, kNumPatterns> std{};
  std::size_t replicates = 0;
  std::size_t swaps_per_replicate = 0;
};

/// Censuses t randomized replicates; replicate i is seeded with base_seed + i.
/// Output is independent of the pool width.
NullStats sample_null(const Graph& g, std::size_t t, std::size_t q, std::uint64_t base_seed,
                      const WorkerPool* pool = nullptr);

struct ZScores {
  std::array<double, kNumPatterns> z{};
  double operator[](PatternId p) const noexcept { return z[index_of(p)]; }
  friend bool operator==(const ZScores&, const ZScores&) = default;
};

/// z = (C - mean) / std. A zero std yields 0 when C equals the mean and
/// sign(C - mean) * cap otherwise. Throws std::invalid_argument for cap <= 0.
ZScores zscores(const GraphletCounts& counts, const NullStats& stats, double cap = 1e6);

}  // namespace motifsp
