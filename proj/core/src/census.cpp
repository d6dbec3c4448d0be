#include "motifsp/census.hpp"

#include <algorithm>
#include <vector>

#include "checked.hpp"
#include "motifsp/parallel.hpp"

namespace motifsp {

using detail::checked_add;
using detail::checked_mul;
using detail::checked_sub;
using detail::choose2;
using detail::choose3;

std::optional<PatternId> pattern_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNumPatterns; ++i)
    if (kPatternNames[i] == name) return kAllPatterns[i];
  return std::nullopt;
}

namespace {

constexpr std::size_t kChunk = 256;

std::size_t intersect_count(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::size_t i = 0, j = 0, c = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (a[i] > b[j]) ++j;
    else { ++c; ++i; ++j; }
  }
  return c;
}

// Neighbors of higher (degree, id) rank, kept in id order.
struct Oriented {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> out;

  explicit Oriented(const Graph& g) {
    const std::size_t n = g.num_nodes();
    auto higher = [&](NodeId a, NodeId b) {
      auto da = g.degree(a), db = g.degree(b);
      return da != db ? da < db : a < b;
    };
    offsets.assign(n + 1, 0);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v : g.neighbors(u))
        if (higher(u, v)) ++offsets[u + 1];
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    out.resize(offsets[n]);
    for (NodeId u = 0, k = 0; u < n; ++u)
      for (NodeId v : g.neighbors(u))
        if (higher(u, v)) out[k++] = v;
  }
  std::span<const NodeId> of(NodeId u) const { return {out.data() + offsets[u], out.data() + offsets[u + 1]}; }
};

// Sums of subgraph (non-induced) copies and related per-vertex quantities.
struct Partial {
  std::uint64_t open_wedges = 0;   // neighbor pairs of a center that are not adjacent
  std::uint64_t tri_edge_sum = 0;  // sum over ordered edges of t_e  (= 6T)
  std::uint64_t stars = 0;         // sum C(d,3)
  std::uint64_t path_mid = 0;      // sum over edges (d_u-1)(d_v-1)
  std::uint64_t paw = 0;           // sum t_v (d_v - 2)
  std::uint64_t diamond = 0;       // sum over edges C(t_e, 2)
  std::uint64_t cycle = 0;         // 4-cycles
  std::uint64_t clique = 0;        // 4-cliques

  void merge(const Partial& o) {
    open_wedges = checked_add(open_wedges, o.open_wedges);
    tri_edge_sum = checked_add(tri_edge_sum, o.tri_edge_sum);
    stars = checked_add(stars, o.stars);
    path_mid = checked_add(path_mid, o.path_mid);
    paw = checked_add(paw, o.paw);
    diamond = checked_add(diamond, o.diamond);
    cycle = checked_add(cycle, o.cycle);
    clique = checked_add(clique, o.clique);
  }
};

Partial accumulate(const Graph& g, bool size4, const WorkerPool* pool) {
  const std::size_t n = g.num_nodes();
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Partial> parts(chunks);
  std::optional<Oriented> orient;
  if (size4) orient.emplace(g);

  auto rank_less = [&](NodeId a, NodeId b) {
    auto da = g.degree(a), db = g.degree(b);
    return da != db ? da < db : a < b;
  };

  parallel_for(pool, chunks, [&](std::size_t c) {
    Partial p;
    std::vector<std::uint64_t> paths;  // wedge endpoints for C4
    std::vector<NodeId> touched;
    std::vector<NodeId> common;
    if (size4) paths.assign(n, 0);

    const NodeId lo = c * kChunk, hi = std::min<NodeId>(n, lo + kChunk);
    for (NodeId v = lo; v < hi; ++v) {
      const std::uint64_t d = g.degree(v);
      std::uint64_t tv2 = 0;  // 2 * triangles at v
      for (NodeId u : g.neighbors(v)) {
        std::uint64_t t = intersect_count(g.neighbors(v), g.neighbors(u));
        tv2 = checked_add(tv2, t);
        if (size4 && u > v) {
          p.path_mid = checked_add(p.path_mid, checked_mul(d - 1, g.degree(u) - 1));
          p.diamond = checked_add(p.diamond, choose2(t));
        }
      }
      p.tri_edge_sum = checked_add(p.tri_edge_sum, tv2);
      p.open_wedges = checked_add(p.open_wedges, checked_sub(choose2(d), tv2 / 2, "P3"));
      if (!size4) continue;

      p.stars = checked_add(p.stars, choose3(d));
      if (d >= 2) p.paw = checked_add(p.paw, checked_mul(tv2 / 2, d - 2));

      // 4-cycles counted once at their highest-ranked vertex v
      touched.clear();
      for (NodeId u : g.neighbors(v)) {
        if (!rank_less(u, v)) continue;
        for (NodeId w : g.neighbors(u)) {
          if (!rank_less(w, v)) continue;
          if (paths[w]++ == 0) touched.push_back(w);
        }
      }
      for (NodeId w : touched) {
        p.cycle = checked_add(p.cycle, choose2(paths[w]));
        paths[w] = 0;
      }

      // 4-cliques on the rank orientation
      auto ov = orient->of(v);
      for (NodeId u : ov) {
        auto ou = orient->of(u);
        common.clear();
        std::set_intersection(ov.begin(), ov.end(), ou.begin(), ou.end(), std::back_inserter(common));
        for (NodeId w : common) p.clique = checked_add(p.clique, intersect_count(common, orient->of(w)));
      }
    }
    parts[c] = p;
  });

  Partial total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

}  // namespace

Size3Counts count_size3(const Graph& g, const WorkerPool* pool) {
  Partial p = accumulate(g, false, pool);
  const std::uint64_t tri = p.tri_edge_sum / 6;
  return {p.open_wedges, tri};
}

namespace {

GraphletCounts solve_size4(const Partial& p) {
  const std::uint64_t tri = p.tri_edge_sum / 6;
  const std::uint64_t nk4 = p.clique;
  const std::uint64_t nd = p.diamond;
  const std::uint64_t nc4 = p.cycle;
  const std::uint64_t npaw = p.paw;
  const std::uint64_t ns4 = p.stars;
  const std::uint64_t np4 = checked_sub(p.path_mid, checked_mul(3, tri), "P4 copies");

  // copies of row pattern inside column pattern (on the same 4 nodes):
  //            P4 S4 C4 PAW DIA K4
  //   P4        1  0  4   2   6 12
  //   S4           1  0   1   2  4
  //   C4              1   0   1  3
  //   PAW                 1   4 12
  //   DIAMOND                 1  6
  GraphletCounts c;
  c[PatternId::K4] = nk4;
  c[PatternId::DIAMOND] = checked_sub(nd, checked_mul(6, nk4), "DIAMOND");
  const auto dia = c[PatternId::DIAMOND];
  c[PatternId::C4] = checked_sub(nc4, checked_add(dia, checked_mul(3, nk4)), "C4");
  c[PatternId::PAW] = checked_sub(npaw, checked_add(checked_mul(4, dia), checked_mul(12, nk4)), "PAW");
  const auto paw = c[PatternId::PAW];
  c[PatternId::S4] =
      checked_sub(ns4, checked_add(checked_add(paw, checked_mul(2, dia)), checked_mul(4, nk4)), "S4");
  std::uint64_t p4_sub = checked_mul(4, c[PatternId::C4]);
  p4_sub = checked_add(p4_sub, checked_mul(2, paw));
  p4_sub = checked_add(p4_sub, checked_mul(6, dia));
  p4_sub = checked_add(p4_sub, checked_mul(12, nk4));
  c[PatternId::P4] = checked_sub(np4, p4_sub, "P4");
  return c;
}

}  // namespace

GraphletCounts count_size4(const Graph& g, const WorkerPool* pool) {
  return solve_size4(accumulate(g, true, pool));
}

GraphletCounts census(const Graph& g, const WorkerPool* pool) {
  Partial p = accumulate(g, true, pool);
  GraphletCounts c = solve_size4(p);
  const std::uint64_t tri = p.tri_edge_sum / 6;
  c[PatternId::TRI] = tri;
  c[PatternId::P3] = p.open_wedges;
  return c;
}

GraphletCounts oracle_census(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& e : g.edges()) adj[e.u][e.v] = adj[e.v][e.u] = 1;

  GraphletCounts c;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const int eij = adj[i][j], eik = adj[i][k], ejk = adj[j][k];
        const int e3 = eij + eik + ejk;
        if (e3 == 2) ++c[PatternId::P3];
        if (e3 == 3) ++c[PatternId::TRI];
        for (std::size_t l = k + 1; l < n; ++l) {
          const int eil = adj[i][l], ejl = adj[j][l], ekl = adj[k][l];
          const int edges = e3 + eil + ejl + ekl;
          if (edges < 3) continue;
          std::array<int, 4> deg{eij + eik + eil, eij + ejk + ejl, eik + ejk + ekl, eil + ejl + ekl};
          std::sort(deg.begin(), deg.end());
          if (deg[0] == 0) continue;  // isolated vertex: disconnected
          switch (edges) {
            case 3:
              // connected 3-edge graphs on 4 nodes are trees
              if (deg[3] == 3) ++c[PatternId::S4];
              else ++c[PatternId::P4];
              break;
            case 4:
              if (deg[3] == 2) ++c[PatternId::C4];
              else ++c[PatternId::PAW];
              break;
            case 5: ++c[PatternId::DIAMOND]; break;
            case 6: ++c[PatternId::K4]; break;
          }
        }
      }
    }
  }
  return c;
}

std::uint64_t noninduced_p3_from_degrees(const DegreeSequence& d) {
  std::uint64_t s = 0;
  for (auto x : d) s = checked_add(s, choose2(x));
  return s;
}

bool check_conservation(const Graph& g, const GraphletCounts& counts) {
  const std::uint64_t wedges = noninduced_p3_from_degrees(degree_sequence(g));
  const std::uint64_t tri3 = checked_mul(3, counts[PatternId::TRI]);
  return tri3 <= wedges && counts[PatternId::P3] == wedges - tri3;
}

bool check_conservation(const Graph& g) {
  Size3Counts s = count_size3(g);
  GraphletCounts c;
  c[PatternId::P3] = s.p3;
  c[PatternId::TRI] = s.tri;
  return check_conservation(g, c);
}

}  // namespace motifsp
