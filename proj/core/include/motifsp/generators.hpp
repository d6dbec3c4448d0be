#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motifsp/graph.hpp"
#include "motifsp/sp.hpp"

namespace motifsp {

/// Synthetic graph families. The first 11 are random, the last 12 are
/// deterministic (optionally perturbed by edge rewiring).
enum class Family : std::uint8_t {
  ErdosRenyi,
  WattsStrogatz,
  NewmanWattsStrogatz,
  ExtendedBarabasiAlbert,
  PowerlawCluster,
  DuplicationDivergence,
  GaussianPartition,
  ForestFire,
  RandomGeometric,
  Geometric3dDd,
  RandomRegular,
  BalancedTree,
  BinomialTree,
  FullRaryTree,
  CircularLadder,
  ChordalCycle,
  Barbell,
  Lollipop,
  Dgm,
  SquareLattice,
  HexagonalLattice,
  TriangularLattice,
  Star,
};

inline constexpr std::size_t kNumFamilies = 23;
inline constexpr std::size_t kNumRandomFamilies = 11;

inline constexpr std::array<std::string_view, kNumFamilies> kFamilyNames{
    "erdos_renyi",       "watts_strogatz",    "newman_watts_strogatz", "extended_barabasi_albert",
    "powerlaw_cluster",  "duplication_divergence", "gaussian_partition", "forest_fire",
    "random_geometric",  "geometric_3d_dd",   "random_regular",        "balanced_tree",
    "binomial_tree",     "full_rary_tree",    "circular_ladder",       "chordal_cycle",
    "barbell",           "lollipop",          "dgm",                   "square_lattice",
    "hexagonal_lattice", "triangular_lattice", "star"};

constexpr std::string_view name_of(Family f) noexcept { return kFamilyNames[static_cast<std::size_t>(f)]; }
constexpr bool is_deterministic(Family f) noexcept { return static_cast<std::size_t>(f) >= kNumRandomFamilies; }
std::optional<Family> family_from_name(std::string_view name);
std::vector<Family> all_families();

/// A family plus its named parameters (integers are stored as doubles) and
/// the seed of its random stream. Deterministic families accept "rewire",
/// the fraction of edges passed through rewire_fraction after construction.
struct GeneratorSpec {
  Family family = Family::ErdosRenyi;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;

  double get(const std::string& key) const;
  double get_or(const std::string& key, double fallback) const;
};

/// Node-count range for sampled specs. Families with discrete sizes (trees,
/// dgm, lattices) pick the nearest admissible size inside the range when one
/// exists.
struct SizeProfile {
  std::size_t n_min = 50;
  std::size_t n_max = 2000;
  double rewire_fraction = 0.25;       ///< applied to half of deterministic draws
  double gaussian_variance = 10.0;     ///< group-size variance v
  double gaussian_attractiveness = 5;  ///< kappa, bound of p_in over p_out
};

/// Builds the graph described by spec. Throws std::invalid_argument for
/// out-of-range or inconsistent parameters.
Graph generate(const GeneratorSpec& spec);

/// Draws an in-regime parameter set for the family.
GeneratorSpec sample_spec(Family family, const SizeProfile& profile, std::uint64_t rng_seed);

/// Power-law exponent of the extended preferential-attachment model with
/// link-addition probability p and rewiring probability q.
double extended_ba_exponent(double m, double p, double q);

/// Upper bound on the inter-group probability that keeps the expected edge
/// count under max_edges, and the matching intra-group bound kappa * q.
struct PartitionBounds {
  double q_max = 0.0;
  double p_max = 0.0;
};
PartitionBounds gaussian_partition_bounds(double nodes, double mean_group_size, double max_edges,
                                          double kappa);

struct DatasetRecord;

struct ReferenceProfile {
  std::string id;
  SignificanceProfile sp;
};

/// True profiles keyed by generating family, each list sorted by record id.
std::map<Family, std::vector<ReferenceProfile>> nearest_family_reference_profiles(
    std::span<const DatasetRecord> dataset);

}  // namespace motifsp
