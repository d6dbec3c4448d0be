#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace motifsp {

using NodeId = std::uint64_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph in compressed adjacency form.
///
/// Every neighbor list is strictly increasing, contains no self-loop, and
/// adjacency is symmetric. Instances are immutable once built.
class Graph {
 public:
  Graph() = default;

  /// Builds from edges that are already simple (no loops, no duplicates in
  /// either orientation). Throws std::invalid_argument otherwise.
  static Graph from_simple_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return neighbors_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId u, NodeId v) const noexcept;

  /// Canonical edge list: u < v, sorted by (u, v).
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
};

using DegreeSequence = std::vector<std::uint64_t>;

struct EdgeListBuild {
  Graph graph;
  std::size_t dropped = 0;  ///< self-loops plus duplicate edges discarded
};

/// Canonicalizes an arbitrary edge list. Without a declared node count,
/// n = max id + 1. Throws std::invalid_argument when an id is >= declared n.
EdgeListBuild from_edge_list(std::span<const Edge> edges, std::optional<std::size_t> n = std::nullopt);

DegreeSequence degree_sequence(const Graph& g);

struct RewireOutcome {
  Graph graph;
  std::size_t steps = 0;       ///< rewiring steps attempted
  std::size_t lost_edges = 0;  ///< steps whose new edge already existed
};

/// Applies floor(p*m) single-edge rewiring steps. Each step removes a uniform
/// edge (u,v), keeps a uniform endpoint and reattaches it to a uniform node
/// outside {u,v}; if that edge already exists the graph loses one edge.
RewireOutcome rewire_fraction(const Graph& g, double p, std::uint64_t rng_seed);

/// Writes "u v\n" per edge, u < v, lexicographic order. Trailing isolated
/// nodes (n > max id + 1) are recorded in a leading "# n <count>" line.
void write_edge_list(const Graph& g, std::ostream& out);
std::string to_edge_list_string(const Graph& g);

/// Parses the edge-list text format. Blank lines and '#' comments are
/// skipped; "# n <count>" declares the node count. Throws DataError on
/// malformed lines.
Graph read_edge_list(std::istream& in, std::optional<std::size_t> n = std::nullopt);
Graph read_edge_list_file(const std::string& path, std::optional<std::size_t> n = std::nullopt);
void write_edge_list_file(const Graph& g, const std::string& path);

/// Empty string when all structural invariants hold, otherwise a description.
std::string validate(const Graph& g);

/// Returns the graph with node v renamed to perm[v].
Graph relabel(const Graph& g, std::span<const NodeId> perm);

/// Node-disjoint union; nodes of b are shifted by a.num_nodes().
Graph disjoint_union(const Graph& a, const Graph& b);

}  // namespace motifsp
