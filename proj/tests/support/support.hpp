#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "motifsp/census.hpp"
#include "motifsp/graph.hpp"

namespace testsupport {

using motifsp::Edge;
using motifsp::Graph;
using motifsp::NodeId;

inline Graph make(std::size_t n, std::vector<Edge> edges) { return motifsp::from_edge_list(edges, n).graph; }

inline Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) e.push_back({u, v});
  return make(n, e);
}

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId v = 1; v < n; ++v) e.push_back({v - 1, v});
  return make(n, e);
}

inline Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId v = 0; v < n; ++v) e.push_back({v, (v + 1) % n});
  return make(n, e);
}

inline Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeId v = 1; v <= leaves; ++v) e.push_back({0, v});
  return make(leaves + 1, e);
}

/// G(n, p) drawn with its own engine, independent of the library RNG helpers.
inline Graph gnp(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (coin(rng)) e.push_back({u, v});
  return make(n, e);
}

inline std::vector<NodeId> random_perm(std::size_t n, std::uint64_t seed) {
  std::vector<NodeId> p(n);
  for (NodeId i = 0; i < n; ++i) p[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Census by canonical adjacency bitmask of every node subset. Each 3- or
/// 4-subset is reduced to the minimum mask over all vertex orderings and
/// looked up in a table built from reference drawings of the patterns.
class MaskOracle {
 public:
  MaskOracle() {
    auto add = [&](motifsp::PatternId id, std::vector<std::pair<int, int>> edges, int k) {
      int m = 0;
      for (auto [a, b] : edges) m |= bit(a, b);
      table_[k == 3 ? 0 : 1].push_back({canonical(m, k), id});
    };
    using P = motifsp::PatternId;
    add(P::P3, {{0, 1}, {1, 2}}, 3);
    add(P::TRI, {{0, 1}, {1, 2}, {0, 2}}, 3);
    add(P::P4, {{0, 1}, {1, 2}, {2, 3}}, 4);
    add(P::S4, {{0, 1}, {0, 2}, {0, 3}}, 4);
    add(P::C4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 4);
    add(P::PAW, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}, 4);
    add(P::DIAMOND, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}}, 4);
    add(P::K4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, 4);
    for (int k = 3; k <= 4; ++k)
      for (int mask = 0; mask < 64; ++mask) {
        const int canon = canonical(mask, k);
        for (const auto& [m, id] : table_[k - 3])
          if (m == canon) class_[k - 3][mask] = static_cast<int>(motifsp::index_of(id));
      }
  }

  motifsp::GraphletCounts operator()(const Graph& g) const {
    motifsp::GraphletCounts c;
    const std::size_t n = g.num_nodes();
    std::array<NodeId, 4> s{};
    for (s[0] = 0; s[0] < n; ++s[0])
      for (s[1] = s[0] + 1; s[1] < n; ++s[1])
        for (s[2] = s[1] + 1; s[2] < n; ++s[2]) {
          classify(g, s, 3, c);
          for (s[3] = s[2] + 1; s[3] < n; ++s[3]) classify(g, s, 4, c);
        }
    return c;
  }

 private:
  static int bit(int a, int b) {
    if (a > b) std::swap(a, b);
    static constexpr int idx[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return 1 << idx[a][b];
  }
  static int canonical(int mask, int k) {
    std::array<int, 4> perm{0, 1, 2, 3};
    int best = 1 << 30;
    do {
      int m = 0;
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
          if (mask & bit(a, b)) m |= bit(perm[a], perm[b]);
      best = std::min(best, m);
    } while (std::next_permutation(perm.begin(), perm.begin() + k));
    return best;
  }
  void classify(const Graph& g, const std::array<NodeId, 4>& s, int k, motifsp::GraphletCounts& c) const {
    int m = 0;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        if (g.has_edge(s[a], s[b])) m |= bit(a, b);
    const int cls = class_[k - 3][m];
    if (cls >= 0) ++c.values[static_cast<std::size_t>(cls)];
  }
  std::array<std::vector<std::pair<int, motifsp::PatternId>>, 2> table_;
  // pattern index for every 3- or 4-node adjacency mask, -1 when disconnected
  std::array<std::array<int, 64>, 2> class_ = [] {
    std::array<std::array<int, 64>, 2> t{};
    for (auto& row : t) row.fill(-1);
    return t;
  }();
};

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("motifsp_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testsupport
