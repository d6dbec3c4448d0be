#include "motifsp/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "edge_set.hpp"
#include "motifsp/error.hpp"
#include "motifsp/rng.hpp"

namespace motifsp {

Graph Graph::from_simple_edges(std::size_t n, std::span<const Edge> edges) {
  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loop in simple edge list");
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.neighbors_.resize(g.offsets_[n]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& e : edges) {
    g.neighbors_[fill[e.u]++] = e.v;
    g.neighbors_[fill[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto first = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
    auto last = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last) throw std::invalid_argument("duplicate edge in simple edge list");
  }
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
  if (u >= num_nodes() || v >= num_nodes()) return false;
  auto a = neighbors(u);
  auto b = neighbors(v);
  if (a.size() > b.size()) {
    std::swap(a, b);
    std::swap(u, v);
  }
  return std::binary_search(a.begin(), a.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u)
    for (NodeId v : neighbors(u))
      if (u < v) out.push_back({u, v});
  return out;
}

EdgeListBuild from_edge_list(std::span<const Edge> edges, std::optional<std::size_t> n) {
  std::size_t count = 0;
  if (n) {
    count = *n;
    for (const auto& e : edges)
      if (e.u >= count || e.v >= count)
        throw std::invalid_argument("node id " + std::to_string(std::max(e.u, e.v)) +
                                    " >= declared node count " + std::to_string(count));
  } else {
    for (const auto& e : edges) count = std::max<std::size_t>(count, std::max(e.u, e.v) + 1);
  }

  std::vector<Edge> canon;
  canon.reserve(edges.size());
  std::size_t dropped = 0;
  for (const auto& e : edges) {
    if (e.u == e.v) {
      ++dropped;
      continue;
    }
    canon.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
  }
  std::sort(canon.begin(), canon.end());
  auto last = std::unique(canon.begin(), canon.end());
  dropped += static_cast<std::size_t>(canon.end() - last);
  canon.erase(last, canon.end());
  return {Graph::from_simple_edges(count, canon), dropped};
}

DegreeSequence degree_sequence(const Graph& g) {
  DegreeSequence d(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) d[v] = g.degree(v);
  return d;
}

RewireOutcome rewire_fraction(const Graph& g, double p, std::uint64_t rng_seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("rewire fraction must lie in [0,1]");
  const std::size_t n = g.num_nodes();
  const auto steps = static_cast<std::size_t>(std::floor(p * static_cast<double>(g.num_edges()) + 1e-9));
  if (steps == 0) return {g, 0, 0};
  if (n < 3) throw std::invalid_argument("rewiring needs at least 3 nodes");

  detail::EdgeSet set(g.edges());
  Rng rng = make_rng(rng_seed);
  RewireOutcome out;
  for (std::size_t s = 0; s < steps; ++s) {
    ++out.steps;
    if (set.size() == 0) continue;
    Edge e = set.at(uniform_index(rng, set.size()));
    set.erase(e.u, e.v);
    NodeId keep = uniform_index(rng, 2) == 0 ? e.u : e.v;
    // uniform over n - 2 nodes outside {u, v}
    NodeId w = uniform_index(rng, n - 2);
    NodeId lo = std::min(e.u, e.v), hi = std::max(e.u, e.v);
    if (w >= lo) ++w;
    if (w >= hi) ++w;
    if (!set.insert(keep, w)) ++out.lost_edges;
  }
  out.graph = Graph::from_simple_edges(n, set.sorted_edges());
  return out;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  const auto edges = g.edges();
  std::size_t implied = 0;
  for (const auto& e : edges) implied = std::max<std::size_t>(implied, e.v + 1);
  if (g.num_nodes() > implied) out << "# n " << g.num_nodes() << '\n';
  for (const auto& e : edges) out << e.u << ' ' << e.v << '\n';
}

std::string to_edge_list_string(const Graph& g) {
  std::ostringstream os;
  write_edge_list(g, os);
  return os.str();
}

namespace {

bool parse_id(std::string_view tok, NodeId& out) {
  if (tok.empty()) return false;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

Graph read_edge_list(std::istream& in, std::optional<std::size_t> n) {
  std::vector<Edge> edges;
  std::optional<std::size_t> declared = n;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      std::size_t value = 0;
      if (hs >> key >> value && key == "n" && !n) declared = value;
      continue;
    }
    std::string_view sv(line);
    auto sp = sv.find(' ');
    NodeId u = 0, v = 0;
    if (sp == std::string_view::npos || !parse_id(sv.substr(0, sp), u) || !parse_id(sv.substr(sp + 1), v))
      throw DataError("malformed edge-list line " + std::to_string(lineno) + ": '" + line + "'");
    edges.push_back({u, v});
  }
  try {
    return from_edge_list(edges, declared).graph;
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
}

Graph read_edge_list_file(const std::string& path, std::optional<std::size_t> n) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list '" + path + "'");
  return read_edge_list(in, n);
}

void write_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write edge list '" + path + "'");
  write_edge_list(g, out);
}

std::string validate(const Graph& g) {
  std::size_t total = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    auto nb = g.neighbors(v);
    total += nb.size();
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (nb[i] >= g.num_nodes()) return "neighbor id out of range at node " + std::to_string(v);
      if (nb[i] == v) return "self-loop at node " + std::to_string(v);
      if (i > 0 && nb[i - 1] >= nb[i]) return "adjacency not strictly increasing at node " + std::to_string(v);
      auto back = g.neighbors(nb[i]);
      if (!std::binary_search(back.begin(), back.end(), v))
        return "asymmetric edge " + std::to_string(v) + "-" + std::to_string(nb[i]);
    }
  }
  if (total != 2 * g.num_edges()) return "edge count mismatch";
  return {};
}

Graph relabel(const Graph& g, std::span<const NodeId> perm) {
  if (perm.size() != g.num_nodes()) throw std::invalid_argument("permutation size mismatch");
  auto edges = g.edges();
  for (auto& e : edges) e = {perm[e.u], perm[e.v]};
  return from_edge_list(edges, g.num_nodes()).graph;
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  auto edges = a.edges();
  const NodeId shift = a.num_nodes();
  for (auto e : b.edges()) edges.push_back({e.u + shift, e.v + shift});
  return Graph::from_simple_edges(a.num_nodes() + b.num_nodes(), edges);
}

}  // namespace motifsp
