#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "motifsp/graph.hpp"

namespace motifsp {

class WorkerPool;

/// The connected graphs on 3 and 4 nodes, in serialization order.
enum class PatternId : std::uint8_t { P3, TRI, P4, S4, C4, PAW, DIAMOND, K4 };

inline constexpr std::size_t kNumPatterns = 8;
inline constexpr std::array<PatternId, kNumPatterns> kAllPatterns{
    PatternId::P3, PatternId::TRI, PatternId::P4,  PatternId::S4,
    PatternId::C4, PatternId::PAW, PatternId::DIAMOND, PatternId::K4};
inline constexpr std::array<std::string_view, kNumPatterns> kPatternNames{
    "P3", "TRI", "P4", "S4", "C4", "PAW", "DIAMOND", "K4"};

/// Index range of each same-size group within the 8-vector.
inline constexpr std::size_t kSize3Begin = 0, kSize3End = 2;
inline constexpr std::size_t kSize4Begin = 2, kSize4End = 8;

constexpr std::size_t index_of(PatternId p) noexcept { return static_cast<std::size_t>(p); }
constexpr std::string_view name_of(PatternId p) noexcept { return kPatternNames[index_of(p)]; }
std::optional<PatternId> pattern_from_name(std::string_view name);

/// Induced occurrence counts, indexed by PatternId.
struct GraphletCounts {
  std::array<std::uint64_t, kNumPatterns> values{};

  std::uint64_t& operator[](PatternId p) noexcept { return values[index_of(p)]; }
  std::uint64_t operator[](PatternId p) const noexcept { return values[index_of(p)]; }
  friend bool operator==(const GraphletCounts&, const GraphletCounts&) = default;
};

struct Size3Counts {
  std::uint64_t p3 = 0;
  std::uint64_t tri = 0;
};

/// Exact induced 3-path and triangle counts.
Size3Counts count_size3(const Graph& g, const WorkerPool* pool = nullptr);

/// Exact induced counts of the six 4-node patterns (size-3 entries left 0).
///
/// Counts non-induced copies from per-vertex wedge, per-edge triangle and
/// oriented 4-clique enumeration, then solves the triangular system that
/// relates non-induced to induced occurrences. Throws CountOverflow if any
/// intermediate exceeds 64 bits.
GraphletCounts count_size4(const Graph& g, const WorkerPool* pool = nullptr);

/// All eight counts.
GraphletCounts census(const Graph& g, const WorkerPool* pool = nullptr);

/// Exhaustive enumeration of every 3- and 4-node subset. Quartic in n;
/// meant as a test oracle for small graphs.
GraphletCounts oracle_census(const Graph& g);

/// Non-induced 3-paths: sum over nodes of C(d, 2).
std::uint64_t noninduced_p3_from_degrees(const DegreeSequence& d);

/// Induced P3 == sum C(d,2) - 3 * TRI.
bool check_conservation(const Graph& g);
bool check_conservation(const Graph& g, const GraphletCounts& counts);

}  // namespace motifsp
