#include "motifsp/nullmodel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "edge_set.hpp"
#include "motifsp/parallel.hpp"
#include "motifsp/rng.hpp"

namespace motifsp {

SwapOutcome double_edge_swap(const Graph& g, std::size_t q, std::uint64_t rng_seed) {
  SwapOutcome out;
  if (q == 0 || g.num_edges() < 2) {
    out.graph = g;
    return out;
  }
  detail::EdgeSet set(g.edges());
  Rng rng = make_rng(rng_seed);
  const std::size_t m = set.size();
  for (std::size_t s = 0; s < q; ++s) {
    ++out.attempted;
    std::size_t i = uniform_index(rng, m);
    std::size_t j = uniform_index(rng, m - 1);
    if (j >= i) ++j;
    Edge e1 = set.at(i), e2 = set.at(j);
    NodeId a = e1.u, b = e1.v, c = e2.u, d = e2.v;
    if (uniform_index(rng, 2) == 1) std::swap(c, d);
    // (a,b),(c,d) -> (a,d),(c,b)
    if (a == d || c == b || set.contains(a, d) || set.contains(c, b)) {
      ++out.skipped;
      continue;
    }
    set.replace(i, a, d);
    set.replace(j, c, b);
  }
  out.graph = Graph::from_simple_edges(g.num_nodes(), set.sorted_edges());
  return out;
}

std::size_t NullConfig::swaps_for(const Graph& g) const {
  return static_cast<std::size_t>(std::llround(swaps_factor * static_cast<double>(g.num_edges())));
}

NullStats sample_null(const Graph& g, std::size_t t, std::size_t q, std::uint64_t base_seed,
                      const WorkerPool* pool) {
  if (t == 0) throw std::invalid_argument("sample_null needs at least one replicate");
  std::vector<GraphletCounts> reps(t);
  parallel_for(pool, t, [&](std::size_t i) {
    reps[i] = census(double_edge_swap(g, q, base_seed + i).graph);
  });

  NullStats st;
  st.replicates = t;
  st.swaps_per_replicate = q;
  const double dt = static_cast<double>(t);
  for (std::size_t k = 0; k < kNumPatterns; ++k) {
    long double sum = 0;
    for (const auto& r : reps) sum += static_cast<long double>(r.values[k]);
    const double mean = static_cast<double>(sum / dt);
    long double ss = 0;
    for (const auto& r : reps) {
      long double dev = static_cast<long double>(r.values[k]) - mean;
      ss += dev * dev;
    }
    st.mean[k] = mean;
    st.std[k] = static_cast<double>(std::sqrt(ss / dt));
  }
  return st;
}

ZScores zscores(const GraphletCounts& counts, const NullStats& stats, double cap) {
  if (!(cap > 0.0)) throw std::invalid_argument("z-score cap must be positive");
  ZScores out;
  for (std::size_t k = 0; k < kNumPatterns; ++k) {
    const double diff = static_cast<double>(counts.values[k]) - stats.mean[k];
    if (stats.std[k] > 0.0) {
      out.z[k] = diff / stats.std[k];
    } else if (diff == 0.0) {
      out.z[k] = 0.0;
    } else {
      out.z[k] = diff > 0.0 ? cap : -cap;
    }
  }
  return out;
}

}  // namespace motifsp
