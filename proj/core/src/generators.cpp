#include "motifsp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "motifsp/dataset.hpp"
#include "motifsp/rng.hpp"

namespace motifsp {

std::optional<Family> family_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNumFamilies; ++i)
    if (kFamilyNames[i] == name) return static_cast<Family>(i);
  return std::nullopt;
}

std::vector<Family> all_families() {
  std::vector<Family> out;
  for (std::size_t i = 0; i < kNumFamilies; ++i) out.push_back(static_cast<Family>(i));
  return out;
}

double GeneratorSpec::get(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end())
    throw std::invalid_argument(std::string(name_of(family)) + ": missing parameter '" + key + "'");
  return it->second;
}

double GeneratorSpec::get_or(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

namespace {

[[noreturn]] void bad(Family f, const std::string& what) {
  throw std::invalid_argument(std::string(name_of(f)) + ": " + what);
}

std::size_t as_count(const GeneratorSpec& s, const std::string& key, std::size_t min_value) {
  double v = s.get(key);
  if (!(v >= 0) || v != std::floor(v)) bad(s.family, "parameter '" + key + "' must be a non-negative integer");
  auto out = static_cast<std::size_t>(v);
  if (out < min_value) bad(s.family, "parameter '" + key + "' must be >= " + std::to_string(min_value));
  return out;
}

double as_prob(const GeneratorSpec& s, const std::string& key) {
  double v = s.get(key);
  if (!(v >= 0.0 && v <= 1.0)) bad(s.family, "parameter '" + key + "' must lie in [0,1]");
  return v;
}

// Growable simple graph used while generating.
class Builder {
 public:
  explicit Builder(std::size_t n = 0) : adj_(n) {}

  NodeId add_node() {
    adj_.emplace_back();
    return adj_.size() - 1;
  }
  std::size_t num_nodes() const { return adj_.size(); }
  std::size_t num_edges() const { return keys_.size(); }
  std::size_t degree(NodeId v) const { return adj_[v].size(); }
  const std::vector<NodeId>& neighbors(NodeId v) const { return adj_[v]; }
  bool has_edge(NodeId u, NodeId v) const { return keys_.count(key(u, v)) != 0; }

  bool add_edge(NodeId u, NodeId v) {
    if (u == v || !keys_.insert(key(u, v)).second) return false;
    adj_[u].push_back(v);
    adj_[v].push_back(u);
    return true;
  }

  void remove_edge(NodeId u, NodeId v) {
    if (!keys_.erase(key(u, v))) return;
    auto drop = [](std::vector<NodeId>& list, NodeId x) { list.erase(std::find(list.begin(), list.end(), x)); };
    drop(adj_[u], v);
    drop(adj_[v], u);
  }

  Graph build() const {
    std::vector<Edge> edges;
    edges.reserve(keys_.size());
    for (NodeId u = 0; u < adj_.size(); ++u)
      for (NodeId v : adj_[u])
        if (u < v) edges.push_back({u, v});
    std::sort(edges.begin(), edges.end());
    return Graph::from_simple_edges(adj_.size(), edges);
  }

 private:
  static std::uint64_t key(NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return (u << 32) | v;
  }
  std::vector<std::vector<NodeId>> adj_;
  std::unordered_set<std::uint64_t> keys_;
};

template <class T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[uniform_index(rng, v.size())];
}

// m distinct elements drawn by repeated uniform choice from a multiset.
std::vector<NodeId> random_subset(const std::vector<NodeId>& seq, std::size_t m, Rng& rng) {
  std::vector<NodeId> out;
  std::unordered_set<NodeId> seen;
  while (out.size() < m) {
    NodeId x = pick(seq, rng);
    if (seen.insert(x).second) out.push_back(x);
  }
  return out;
}

// ---- random families ------------------------------------------------------

Graph erdos_renyi(const GeneratorSpec& s) {
  const std::size_t n = as_count(s, "n", 0);
  const double p = as_prob(s, "p");
  Rng rng = make_rng(s.seed);
  Builder b(n);
  if (p <= 0.0 || n < 2) return b.build();
  if (p >= 1.0) {
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v) b.add_edge(u, v);
    return b.build();
  }
  // geometric skipping over the lower triangle
  const double lp = std::log1p(-p);
  long long v = 1, w = -1;
  const auto nn = static_cast<long long>(n);
  while (v < nn) {
    double r = uniform01(rng);
    w += 1 + static_cast<long long>(std::floor(std::log1p(-r) / lp));
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) b.add_edge(static_cast<NodeId>(v), static_cast<NodeId>(w));
  }
  return b.build();
}

void ring_lattice(Builder& b, std::size_t n, std::size_t k) {
  for (std::size_t j = 1; j <= k / 2; ++j)
    for (NodeId u = 0; u < n; ++u) b.add_edge(u, (u + j) % n);
}

void check_ring(const GeneratorSpec& s, std::size_t n, std::size_t k) {
  if (k >= n) bad(s.family, "k must be smaller than n");
  if (k < 2 || k % 2) bad(s.family, "k must be even and >= 2");
}

Graph watts_strogatz(const GeneratorSpec& s) {
  const std::size_t n = as_count(s, "n", 3);
  const std::size_t k = as_count(s, "k", 0);
  const double p = as_prob(s, "p");
  check_ring(s, n, k);
  Rng rng = make_rng(s.seed);
  Builder b(n);
  ring_lattice(b, n, k);
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (NodeId u = 0; u < n; ++u) {
      if (uniform01(rng) >= p) continue;
      NodeId v = (u + j) % n;
      if (b.degree(u) >= n - 1) continue;
      NodeId w;
      do {
        w = uniform_index(rng, n);
      } while (w == u || b.has_edge(u, w));
      b.remove_edge(u, v);
      b.add_edge(u, w);
    }
  }
  return b.build();
}

Graph newman_watts_strogatz(const GeneratorSpec& s) {
  const std::size_t n = as_count(s, "n", 3);
  const std::size_t k = as_count(s, "k", 0);
  const double p = as_prob(s, "p");
  check_ring(s, n, k);
  Rng rng = make_rng(s.seed);
  Builder b(n);
  ring_lattice(b, n, k);
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (NodeId u = 0; u < n; ++u) {
      if (uniform01(rng) >= p) continue;
      if (b.degree(u) >= n - 1) continue;
      NodeId w;
      do {
        w = uniform_index(rng, n);
      } while (w == u || b.has_edge(u, w));
      b.add_edge(u, w);
    }
  }
  return b.build();
}

// Draws from the preference multiset until the node is not prohibited;
// falls back to a uniform allowed node after many rejections.
NodeId preferential_pick(const std::vector<NodeId>& pref, const std::unordered_set<NodeId>& prohibited,
                         std::size_t n, Rng& rng) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    NodeId x = pick(pref, rng);
    if (!prohibited.count(x)) return x;
  }
  std::vector<NodeId> allowed;
  for (NodeId x = 0; x < n; ++x)
    if (!prohibited.count(x)) allowed.push_back(x);
  return pick(allowed, rng);
}

Graph extended_barabasi_albert(const GeneratorSpec& s) {
  const std::size_t n = as_count(s, "n", 2);
  const std::size_t m = as_count(s, "m", 1);
  const double p = as_prob(s, "p");
  const double q = as_prob(s, "q");
  if (m >= n) bad(s.family, "m must be smaller than n");
  if (p + q >= 1.0) bad(s.family, "p + q must be < 1");
  Rng rng = make_rng(s.seed);
  Builder b(m);
  std::vector<NodeId> pref(m);
  std::iota(pref.begin(), pref.end(), 0);

  while (b.num_nodes() < n) {
    const double a = uniform01(rng);
    const std::size_t size = b.num_nodes();
    const std::size_t clique_degree = size - 1;
    const std::size_t clique_edges = size * clique_degree / 2;
    if (a < p && b.num_edges() + m <= clique_edges) {
      // m new links between existing nodes
      std::vector<NodeId> eligible;
      for (NodeId v = 0; v < size; ++v)
        if (b.degree(v) < clique_degree) eligible.push_back(v);
      for (std::size_t i = 0; i < m && !eligible.empty(); ++i) {
        NodeId src = pick(eligible, rng);
        std::unordered_set<NodeId> prohibited(b.neighbors(src).begin(), b.neighbors(src).end());
        prohibited.insert(src);
        NodeId dst = preferential_pick(pref, prohibited, size, rng);
        b.add_edge(src, dst);
        pref.push_back(src);
        pref.push_back(dst);
        auto drop_full = [&](NodeId x) {
          if (b.degree(x) == clique_degree) {
            auto it = std::find(eligible.begin(), eligible.end(), x);
            if (it != eligible.end()) eligible.erase(it);
          }
        };
        drop_full(src);
        drop_full(dst);
      }
    } else if (a >= p && a < p + q && b.num_edges() >= m && b.num_edges() < clique_edges) {
      // rewire m links
      std::vector<NodeId> eligible;
      for (NodeId v = 0; v < size; ++v)
        if (b.degree(v) > 0 && b.degree(v) < clique_degree) eligible.push_back(v);
      for (std::size_t i = 0; i < m && !eligible.empty(); ++i) {
        NodeId node = pick(eligible, rng);
        NodeId src = pick(b.neighbors(node), rng);
        std::unordered_set<NodeId> prohibited(b.neighbors(node).begin(), b.neighbors(node).end());
        prohibited.insert(node);
        NodeId dst = preferential_pick(pref, prohibited, size, rng);
        b.remove_edge(node, src);
        b.add_edge(node, dst);
        pref.erase(std::find(pref.begin(), pref.end(), src));
        pref.push_back(dst);
        auto refresh = [&](NodeId x) {
          auto it = std::find(eligible.begin(), eligible.end(), x);
          bool ok = b.degree(x) > 0 && b.degree(x) < clique_degree;
          if (ok && it == eligible.end()) eligible.push_back(x);
          if (!ok && it != eligible.end()) eligible.erase(it);
        };
        refresh(src);
        refresh(dst);
        refresh(node);
      }
    } else {
      auto targets = random_subset(pref, m, rng);
      NodeId v = b.add_node();
      for (NodeId t : targets) b.add_edge(v, t);
      pref.insert(pref.end(), targets.begin(), targets.end());
      pref.insert(pref.end(), m + 1, v);
    }
  }
  return b.build();
}

Graph powerlaw_cluster(const GeneratorSpec& s) {
  const std::size_t n = as_count(s, "n", 2);
  const std::size_t m = as_count(s, "m", 1);
  const double p = as_prob(s, "p");
  if (m >= n) bad(s.family, "m must be smaller than n");
  Rng rng = make_rng(s.seed);
  Builder b(m);
  std::vector<NodeId> repeated(m);
  std::iota(repeated.begin(), repeated.end(), 0);
  while (b.num_nodes() < n) {
    auto candidates = random_subset(repeated, m, rng);
    NodeId src = b.add_node();
    NodeId target = candidates.back();
    candidates.pop_back();
    b.add_edge(src, target);
    repeated.push_back(target);
    std::size_t count = 1;
    while (count < m) {
      if (uniform01(rng) < p) {
        // triad formation: close a triangle through the last target
        std::vector<NodeId> hood;
        for (NodeId x : b.neighbors(target))
          if (x != src && !b.has_edge(src, x)) hood.push_back(x);
        if (!hood.empty()) {
          NodeId x = pick(hood, rng);
          b.add_edge(src, x);
          repeated.push_back(x);
          ++count;
          continue;
        }
      }
      target = candidates.back();
      candidates.pop_back();
      b.add_edge(src, target);
      repeated.push_back(target);
      ++count;
    }
    repeated.insert(repeated.end(), m, src);
  }
  return b.build();
}

Graph duplication_divergence(const GeneratorSpec& s) {
  const std::size_t n = as_count(s, "n", 2);
  const double sigma = s.get("sigma");
  if (!(sigma > 0.0 && sigma <= 1.0)) bad(s.family, "sigma must lie in (0,1]");
  Rng rng = make_rng(s.seed);
  Builder b(2);
  b.add_edge(0, 1);
  while (b.num_nodes() < n) {
    NodeId parent = uniform_index(rng, b.num_nodes());
    std::vector<NodeId> kept;
    for (NodeId x : b.neighbors(parent))
      if (uniform01(rng) < sigma) kept.push_back(x);
    if (kept.empty()) continue;  // discarded duplicate
    NodeId v = b.add_node();
    for (NodeId x : kept) b.add_edge(v, x);
  }
  return b.build();
}

Graph gaussian_partition(const GeneratorSpec& s) {
  const std::size_t n = as_count(s, "n", 1);
  const double mean = s.get("s");
  const double var = s.get_or("v", 10.0);
  const double p_in = as_prob(s, "p_in");
  const double p_out = as_prob(s, "p_out");
  if (!(mean >= 1.0)) bad(s.family, "mean group size s must be >= 1");
  if (!(var >= 0.0)) bad(s.family, "variance v must be >= 0");
  Rng rng = make_rng(s.seed);
  std::normal_distribution<double> size_dist(mean, std::sqrt(var));
  std::vector<std::size_t> group(n);
  std::size_t assigned = 0, gid = 0;
  while (assigned < n) {
    auto size = static_cast<long long>(std::llround(size_dist(rng)));
    if (size < 1) size = 1;
    auto take = std::min<std::size_t>(static_cast<std::size_t>(size), n - assigned);
    for (std::size_t i = 0; i < take; ++i) group[assigned + i] = gid;
    assigned += take;
    ++gid;
  }
  Builder b(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (uniform01(rng) < (group[u] == group[v] ? p_in : p_out)) b.add_edge(u, v);
  return b.build();
}

Graph forest_fire(const GeneratorSpec& s) {
  const std::size_t n = as_count(s, "n", 1);
  const double fwd = as_prob(s, "fwd");
  const double bwd = as_prob(s, "bwd");
  if (fwd >= 1.0 || bwd >= 1.0) bad(s.family, "burning probabilities must be < 1");
  Rng rng = make_rng(s.seed);
  std::vector<std::vector<NodeId>> out(n), in(n);
  std::geometric_distribution<std::size_t> out_count(1.0 - fwd), in_count(1.0 - bwd);
  std::vector<std::uint32_t> stamp(n, 0);
  for (NodeId v = 1; v < n; ++v) {
    const auto mark = static_cast<std::uint32_t>(v);
    NodeId amb = uniform_index(rng, v);
    std::vector<NodeId> queue{amb};
    stamp[amb] = mark;
    out[v].push_back(amb);
    in[amb].push_back(v);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      NodeId x = queue[head];
      auto spread = [&](const std::vector<NodeId>& pool, std::size_t want) {
        std::vector<NodeId> fresh;
        for (NodeId y : pool)
          if (stamp[y] != mark) fresh.push_back(y);
        want = std::min(want, fresh.size());
        // partial Fisher-Yates
        for (std::size_t i = 0; i < want; ++i) {
          std::size_t j = i + uniform_index(rng, fresh.size() - i);
          std::swap(fresh[i], fresh[j]);
          NodeId y = fresh[i];
          stamp[y] = mark;
          out[v].push_back(y);
          in[y].push_back(v);
          queue.push_back(y);
        }
      };
      std::size_t k_out = fwd > 0 ? out_count(rng) : 0;
      std::size_t k_in = bwd > 0 ? in_count(rng) : 0;
      spread(out[x], k_out);
      spread(in[x], k_in);
    }
  }
  std::vector<Edge> edges;
  for (NodeId v = 0; v < n; ++v)
    for (NodeId y : out[v]) edges.push_back({v, y});
  return from_edge_list(edges, n).graph;
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

Graph proximity_graph(const std::vector<std::vector<double>>& pts, double radius) {
  const std::size_t n = pts.size();
  const double r2 = radius * radius;
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < pts[u].size() && d2 <= r2; ++k) {
        double t = pts[u][k] - pts[v][k];
        d2 += t * t;
      }
      if (d2 <= r2) edges.push_back({u, v});
    }
  }
  return Graph::from_simple_edges(n, edges);
}

Graph random_geometric(const GeneratorSpec& s) {
  const std::size_t n = as_count(s, "n", 0);
  const std::size_t dim = as_count(s, "dim", 1);
  const double radius = s.get("radius");
  if (!(radius >= 0.0)) bad(s.family, "radius must be >= 0");
  Rng rng = make_rng(s.seed);
  std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
  for (auto& p : pts)
    for (auto& x : p) x = uniform01(rng);
  return proximity_graph(pts, radius);
}

Graph geometric_3d_dd(const GeneratorSpec& s) {
  const std::size_t n = as_count(s, "n", 1);
  const double radius = s.get("radius");
  const double spread = s.get("spread");
  if (!(radius >= 0.0)) bad(s.family, "radius must be >= 0");
  if (!(spread > 0.0 && spread <= 1.0)) bad(s.family, "spread must lie in (0,1]");
  Rng rng = make_rng(s.seed);
  std::vector<std::vector<double>> pts;
  pts.push_back({uniform01(rng), uniform01(rng), uniform01(rng)});
  while (pts.size() < n) {
    // duplicate a uniform parent and displace the copy inside the unit cube
    const auto& parent = pts[uniform_index(rng, pts.size())];
    std::vector<double> child(3);
    for (int k = 0; k < 3; ++k) {
      double x = parent[k] + uniform_real(rng, -spread, spread);
      if (x < 0.0) x = -x;
      if (x > 1.0) x = 2.0 - x;
      child[k] = std::clamp(x, 0.0, 1.0);
    }
    pts.push_back(std::move(child));
  }
  return proximity_graph(pts, radius);
}

Graph random_regular(const GeneratorSpec& s) {
  const std::size_t n = as_count(s, "n", 0);
  const std::size_t d = as_count(s, "d", 0);
  if (d >= n && !(d == 0 && n == 0)) bad(s.family, "degree must be smaller than n");
  if ((n * d) % 2) bad(s.family, "n * d must be even");
  Rng rng = make_rng(s.seed);
  auto key = [](NodeId a, NodeId b) { return a < b ? (a << 32) | b : (b << 32) | a; };

  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::unordered_set<std::uint64_t> edges;
    std::vector<NodeId> stubs;
    for (NodeId v = 0; v < n; ++v) stubs.insert(stubs.end(), d, v);
    bool ok = true;
    while (!stubs.empty()) {
      std::shuffle(stubs.begin(), stubs.end(), rng);
      std::map<NodeId, std::size_t> leftover;
      for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
        NodeId a = stubs[i], b = stubs[i + 1];
        if (a != b && edges.insert(key(a, b)).second) continue;
        ++leftover[a];
        ++leftover[b];
      }
      if (leftover.empty()) break;
      // a retry round is only useful if some pair of leftover nodes can still connect
      bool suitable = false;
      for (auto it = leftover.begin(); it != leftover.end() && !suitable; ++it)
        for (auto jt = leftover.begin(); jt != it; ++jt)
          if (!edges.count(key(it->first, jt->first))) {
            suitable = true;
            break;
          }
      if (!suitable) {
        ok = false;
        break;
      }
      stubs.clear();
      for (auto [v, c] : leftover) stubs.insert(stubs.end(), c, v);
    }
    if (!ok) continue;
    std::vector<Edge> out;
    for (auto k : edges) out.push_back({k >> 32, k & 0xffffffffULL});
    std::sort(out.begin(), out.end());
    return Graph::from_simple_edges(n, out);
  }
  bad(s.family, "failed to realize a regular graph");
}

// ---- deterministic families -----------------------------------------------

Graph balanced_tree(const GeneratorSpec& s) {
  const std::size_t r = as_count(s, "r", 1);
  const std::size_t h = as_count(s, "h", 0);
  std::size_t total = 1, level = 1;
  for (std::size_t i = 0; i < h; ++i) {
    level *= r;
    total += level;
    if (total > (1u << 24)) bad(s.family, "tree too large");
  }
  std::vector<Edge> edges;
  for (NodeId v = 1; v < total; ++v) edges.push_back({(v - 1) / r, v});
  return Graph::from_simple_edges(total, edges);
}

Graph binomial_tree(const GeneratorSpec& s) {
  const std::size_t order = as_count(s, "order", 0);
  if (order > 24) bad(s.family, "order too large");
  std::vector<Edge> edges;
  std::size_t size = 1;
  for (std::size_t i = 0; i < order; ++i) {
    const std::size_t existing = edges.size();
    for (std::size_t e = 0; e < existing; ++e) edges.push_back({edges[e].u + size, edges[e].v + size});
    edges.push_back({0, size});
    size *= 2;
  }
  return Graph::from_simple_edges(size, edges);
}

Graph full_rary_tree(const GeneratorSpec& s) {
  const std::size_t r = as_count(s, "r", 1);
  const std::size_t n = as_count(s, "n", 0);
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) edges.push_back({(v - 1) / r, v});
  return Graph::from_simple_edges(n, edges);
}

Graph circular_ladder(const GeneratorSpec& s) {
  const std::size_t k = as_count(s, "k", 3);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < k; ++i) {
    edges.push_back({i, (i + 1) % k});
    edges.push_back({k + i, k + (i + 1) % k});
    edges.push_back({i, k + i});
  }
  return from_edge_list(edges, 2 * k).graph;
}

bool is_prime(std::size_t p) {
  if (p < 2) return false;
  for (std::size_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t mod) {
  std::uint64_t r = 1 % mod;
  b %= mod;
  while (e) {
    if (e & 1) r = r * b % mod;
    b = b * b % mod;
    e >>= 1;
  }
  return r;
}

Graph chordal_cycle(const GeneratorSpec& s) {
  const std::size_t p = as_count(s, "p", 3);
  if (!is_prime(p)) bad(s.family, "p must be prime");
  std::vector<Edge> edges;
  for (NodeId x = 0; x < p; ++x) {
    edges.push_back({x, (x + 1) % p});
    edges.push_back({x, (x + p - 1) % p});
    // modular inverse x^(p-2); 0 maps to itself and the loop is dropped
    edges.push_back({x, pow_mod(x, p - 2, p)});
  }
  return from_edge_list(edges, p).graph;
}

void add_clique(std::vector<Edge>& edges, NodeId first, std::size_t k) {
  for (NodeId u = first; u < first + k; ++u)
    for (NodeId v = u + 1; v < first + k; ++v) edges.push_back({u, v});
}

Graph barbell(const GeneratorSpec& s) {
  const std::size_t k = as_count(s, "k", 2);
  const std::size_t path = as_count(s, "path", 0);
  std::vector<Edge> edges;
  add_clique(edges, 0, k);
  for (NodeId v = k; v < k + path; ++v) edges.push_back({v - 1, v});
  edges.push_back({k + path - 1, k + path});
  add_clique(edges, k + path, k);
  return Graph::from_simple_edges(2 * k + path, edges);
}

Graph lollipop(const GeneratorSpec& s) {
  const std::size_t k = as_count(s, "k", 2);
  const std::size_t path = as_count(s, "path", 0);
  std::vector<Edge> edges;
  add_clique(edges, 0, k);
  for (NodeId v = k; v < k + path; ++v) edges.push_back({v - 1, v});
  return Graph::from_simple_edges(k + path, edges);
}

Graph dgm(const GeneratorSpec& s) {
  const std::size_t gens = as_count(s, "n", 0);
  if (gens > 12) bad(s.family, "generation too large");
  std::vector<Edge> edges{{0, 1}, {0, 2}, {1, 2}};
  std::size_t nodes = 3;
  for (std::size_t g = 0; g < gens; ++g) {
    const std::size_t existing = edges.size();
    for (std::size_t e = 0; e < existing; ++e) {
      NodeId w = nodes++;
      edges.push_back({edges[e].u, w});
      edges.push_back({edges[e].v, w});
    }
  }
  return Graph::from_simple_edges(nodes, edges);
}

Graph square_lattice(const GeneratorSpec& s) {
  const std::size_t a = as_count(s, "a", 1), b = as_count(s, "b", 1), c = as_count(s, "c", 1);
  auto id = [&](std::size_t i, std::size_t j, std::size_t l) { return (i * b + j) * c + l; };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j)
      for (std::size_t l = 0; l < c; ++l) {
        if (i + 1 < a) edges.push_back({id(i, j, l), id(i + 1, j, l)});
        if (j + 1 < b) edges.push_back({id(i, j, l), id(i, j + 1, l)});
        if (l + 1 < c) edges.push_back({id(i, j, l), id(i, j, l + 1)});
      }
  return Graph::from_simple_edges(a * b * c, edges);
}

// Brick-wall embedding: column i, row j; vertical links in every column and a
// horizontal link to the right when i and j share parity.
Graph hexagonal_lattice(const GeneratorSpec& s) {
  const std::size_t m = as_count(s, "rows", 1);
  const std::size_t n = as_count(s, "cols", 1);
  const bool periodic = s.get_or("periodic", 0.0) != 0.0;
  std::vector<Edge> edges;
  if (periodic) {
    if (n < 2 || n % 2 || m < 2) bad(s.family, "periodic hexagonal lattice needs even cols >= 2 and rows >= 2");
    const std::size_t R = 2 * m;
    auto id = [&](std::size_t i, std::size_t j) { return i * R + j; };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < R; ++j) {
        edges.push_back({id(i, j), id(i, (j + 1) % R)});
        if (i % 2 == j % 2) edges.push_back({id(i, j), id((i + 1) % n, j)});
      }
    return from_edge_list(edges, n * R).graph;
  }
  const std::size_t C = n + 1, R = 2 * m + 2;
  // drop the two degree-1 corners and compact ids
  const std::size_t corner_a = 0 * R + (R - 1);
  const std::size_t corner_b = n * R + (n % 2 ? R - 1 : 0);
  std::vector<NodeId> remap(C * R);
  NodeId next = 0;
  for (std::size_t x = 0; x < C * R; ++x) remap[x] = (x == corner_a || x == corner_b) ? ~NodeId{0} : next++;
  auto add = [&](std::size_t x, std::size_t y) {
    if (remap[x] == ~NodeId{0} || remap[y] == ~NodeId{0}) return;
    edges.push_back({remap[x], remap[y]});
  };
  for (std::size_t i = 0; i < C; ++i)
    for (std::size_t j = 0; j < R; ++j) {
      if (j + 1 < R) add(i * R + j, i * R + j + 1);
      if (i + 1 < C && i % 2 == j % 2) add(i * R + j, (i + 1) * R + j);
    }
  return Graph::from_simple_edges(next, edges);
}

Graph triangular_lattice(const GeneratorSpec& s) {
  const std::size_t rows = as_count(s, "rows", 1);
  const std::size_t cols = as_count(s, "cols", 1);
  const bool periodic = s.get_or("periodic", 0.0) != 0.0;
  if (periodic && (rows < 3 || cols < 3)) bad(s.family, "periodic triangular lattice needs rows, cols >= 3");
  auto id = [&](std::size_t i, std::size_t j) { return i * cols + j; };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const bool right = periodic || j + 1 < cols;
      const bool down = periodic || i + 1 < rows;
      if (right) edges.push_back({id(i, j), id(i, (j + 1) % cols)});
      if (down) edges.push_back({id(i, j), id((i + 1) % rows, j)});
      if (right && down) edges.push_back({id(i, j), id((i + 1) % rows, (j + 1) % cols)});
    }
  return from_edge_list(edges, rows * cols).graph;
}

Graph star(const GeneratorSpec& s) {
  const std::size_t k = as_count(s, "k", 0);
  std::vector<Edge> edges;
  for (NodeId v = 1; v <= k; ++v) edges.push_back({0, v});
  return Graph::from_simple_edges(k + 1, edges);
}

Graph build(const GeneratorSpec& s) {
  switch (s.family) {
    case Family::ErdosRenyi: return erdos_renyi(s);
    case Family::WattsStrogatz: return watts_strogatz(s);
    case Family::NewmanWattsStrogatz: return newman_watts_strogatz(s);
    case Family::ExtendedBarabasiAlbert: return extended_barabasi_albert(s);
    case Family::PowerlawCluster: return powerlaw_cluster(s);
    case Family::DuplicationDivergence: return duplication_divergence(s);
    case Family::GaussianPartition: return gaussian_partition(s);
    case Family::ForestFire: return forest_fire(s);
    case Family::RandomGeometric: return random_geometric(s);
    case Family::Geometric3dDd: return geometric_3d_dd(s);
    case Family::RandomRegular: return random_regular(s);
    case Family::BalancedTree: return balanced_tree(s);
    case Family::BinomialTree: return binomial_tree(s);
    case Family::FullRaryTree: return full_rary_tree(s);
    case Family::CircularLadder: return circular_ladder(s);
    case Family::ChordalCycle: return chordal_cycle(s);
    case Family::Barbell: return barbell(s);
    case Family::Lollipop: return lollipop(s);
    case Family::Dgm: return dgm(s);
    case Family::SquareLattice: return square_lattice(s);
    case Family::HexagonalLattice: return hexagonal_lattice(s);
    case Family::TriangularLattice: return triangular_lattice(s);
    case Family::Star: return star(s);
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace

Graph generate(const GeneratorSpec& spec) {
  Graph g = build(spec);
  if (!is_deterministic(spec.family)) {
    if (spec.params.count("rewire")) bad(spec.family, "rewiring applies to deterministic families only");
    return g;
  }
  const double p = spec.get_or("rewire", 0.0);
  if (!(p >= 0.0 && p <= 1.0)) bad(spec.family, "rewire fraction must lie in [0,1]");
  if (p == 0.0) return g;
  return rewire_fraction(g, p, derive_seed({spec.seed, 0x7265776972ULL})).graph;
}

double extended_ba_exponent(double m, double p, double q) {
  return 1.0 + (2.0 * m * (1.0 - q) + 1.0 - p - q) / m;
}

PartitionBounds gaussian_partition_bounds(double nodes, double mean_group_size, double max_edges, double kappa) {
  const double denom =
      nodes * nodes + nodes * (kappa * std::sqrt(mean_group_size) - mean_group_size * (kappa + 1.0));
  PartitionBounds b;
  b.q_max = denom > 0.0 ? std::min(1.0, 2.0 * max_edges / denom) : 1.0;
  b.p_max = std::min(1.0, kappa * b.q_max);
  return b;
}

namespace {

std::size_t draw_size(Rng& rng, const SizeProfile& prof) {
  if (prof.n_min > prof.n_max) throw std::invalid_argument("size profile: n_min > n_max");
  return prof.n_min + uniform_index(rng, prof.n_max - prof.n_min + 1);
}

std::size_t draw_int(Rng& rng, std::size_t lo, std::size_t hi) {
  if (hi < lo) hi = lo;
  return lo + uniform_index(rng, hi - lo + 1);
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform_real(rng, std::log(lo), std::log(hi)));
}

// Mean clustering of the Holme-Kim model at n = 500 against the triad
// probability p, measured for m = 2 and m = 3.
constexpr std::array<double, 7> kTriadGrid{0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
constexpr std::array<double, 7> kClusteringM2{0.03, 0.110, 0.245, 0.399, 0.537, 0.668, 0.746};
constexpr std::array<double, 7> kClusteringM3{0.03, 0.101, 0.203, 0.295, 0.418, 0.529, 0.584};

double triad_probability_for(double target, std::size_t m) {
  const auto& c = m == 2 ? kClusteringM2 : kClusteringM3;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (target <= c[i]) {
      double t = (target - c[i - 1]) / (c[i] - c[i - 1]);
      return kTriadGrid[i - 1] + t * (kTriadGrid[i] - kTriadGrid[i - 1]);
    }
  return 1.0;
}

std::size_t next_prime(std::size_t x) {
  while (!is_prime(x)) ++x;
  return x;
}

// Largest value in [lo, hi] from an increasing size sequence, or the nearest
// one below lo when none fits.
template <class F>
std::size_t pick_level(Rng& rng, std::size_t lo, std::size_t hi, std::size_t max_level, F nodes_at) {
  std::vector<std::size_t> fits;
  std::size_t best = 0;
  for (std::size_t l = 0; l <= max_level; ++l) {
    auto nodes = nodes_at(l);
    if (nodes >= lo && nodes <= hi) fits.push_back(l);
    if (nodes <= hi) best = l;
  }
  return fits.empty() ? best : fits[uniform_index(rng, fits.size())];
}

}  // namespace

GeneratorSpec sample_spec(Family family, const SizeProfile& prof, std::uint64_t rng_seed) {
  Rng rng = make_rng(derive_seed({rng_seed, static_cast<std::uint64_t>(family)}));
  GeneratorSpec s;
  s.family = family;
  s.seed = derive_seed({rng_seed, 0x5eedULL});
  auto& P = s.params;
  const std::size_t n = std::max<std::size_t>(draw_size(rng, prof), 4);
  const double dn = static_cast<double>(n);

  switch (family) {
    case Family::ErdosRenyi: {
      const auto phase = uniform_index(rng, 3);
      const double ln = std::log(dn);
      P["n"] = dn;
      P["phase"] = static_cast<double>(phase);
      if (phase == 0) P["p"] = 1.0 / dn;                            // critical
      else if (phase == 1) P["p"] = uniform_real(rng, 1.0, ln) / dn;  // supercritical
      else P["p"] = std::min(1.0, uniform_real(rng, ln, 2.0 * ln) / dn);  // connected
      break;
    }
    case Family::WattsStrogatz:
    case Family::NewmanWattsStrogatz: {
      std::size_t kmax = std::min<std::size_t>(10, (n - 1) & ~std::size_t{1});
      P["n"] = dn;
      P["k"] = static_cast<double>(2 * draw_int(rng, 1, kmax / 2));
      P["p"] = log_uniform(rng, 1e-3, 1.0);
      break;
    }
    case Family::ExtendedBarabasiAlbert: {
      const double m = static_cast<double>(draw_int(rng, 1, 4));
      const double gamma = uniform_real(rng, 2.05, 3.0);
      P["n"] = dn;
      P["m"] = m;
      P["gamma"] = gamma;
      // exponent is linear in q: q = (2m + 1 - p - m (gamma - 1)) / (2m + 1)
      double p = 0.0, q = 0.0;
      for (int attempt = 0; attempt < 200; ++attempt) {
        p = attempt < 199 ? uniform_real(rng, 0.0, 0.5) : 0.0;
        q = (2.0 * m + 1.0 - p - m * (gamma - 1.0)) / (2.0 * m + 1.0);
        const double q_max = std::min(1.0 - p, (1.0 - p + m) / (1.0 + 2.0 * m));
        if (q >= 0.0 && q < q_max && p + q < 1.0) break;
      }
      P["p"] = p;
      P["q"] = std::clamp(q, 0.0, 0.999 - p);
      break;
    }
    case Family::PowerlawCluster: {
      constexpr std::array<double, 3> targets{0.35, 0.45, 0.55};
      const double target = targets[uniform_index(rng, 3)];
      const std::size_t m = draw_int(rng, 2, 3);
      P["n"] = dn;
      P["m"] = static_cast<double>(m);
      P["clustering"] = target;
      P["p"] = triad_probability_for(target, m);
      break;
    }
    case Family::DuplicationDivergence: {
      const double e1 = std::exp(-1.0);
      const auto regime = uniform_index(rng, 3);
      P["n"] = dn;
      P["regime"] = static_cast<double>(regime);
      // lower edge of the first regime kept away from 0 so copies are not
      // rejected indefinitely
      if (regime == 0) P["sigma"] = uniform_real(rng, 0.05, e1);
      else if (regime == 1) P["sigma"] = uniform_real(rng, std::nextafter(e1, 1.0), 0.5);
      else P["sigma"] = uniform_real(rng, std::nextafter(0.5, 1.0), 0.95);
      break;
    }
    case Family::GaussianPartition: {
      const double mean = uniform_real(rng, std::max(3.0, dn / 40.0), std::max(4.0, dn / 6.0));
      const double max_edges = uniform_real(rng, 1.5 * dn, 5.0 * dn);
      const auto b = gaussian_partition_bounds(dn, mean, max_edges, prof.gaussian_attractiveness);
      const double q = uniform_real(rng, 0.0, b.q_max);
      const double p_cap = std::min(1.0, prof.gaussian_attractiveness * q);
      P["n"] = dn;
      P["s"] = mean;
      P["v"] = prof.gaussian_variance;
      P["max_edges"] = max_edges;
      P["p_out"] = q;
      P["p_in"] = uniform_real(rng, 0.0, p_cap);
      break;
    }
    case Family::ForestFire:
      P["n"] = dn;
      // closed interval [0, 0.4]
      P["fwd"] = std::min(0.4, uniform_real(rng, 0.0, std::nextafter(0.4, 1.0)));
      P["bwd"] = std::min(0.4, uniform_real(rng, 0.0, std::nextafter(0.4, 1.0)));
      break;
    case Family::RandomGeometric: {
      const int dim = static_cast<int>(draw_int(rng, 2, 5));
      const double degree = uniform_real(rng, 3.0, 12.0);
      P["n"] = dn;
      P["dim"] = dim;
      P["radius"] = std::pow(degree / ((dn - 1.0) * unit_ball_volume(dim)), 1.0 / dim);
      break;
    }
    case Family::Geometric3dDd: {
      const double degree = uniform_real(rng, 3.0, 12.0);
      P["n"] = dn;
      P["spread"] = uniform_real(rng, 0.02, 0.2);
      P["radius"] = std::pow(degree / ((dn - 1.0) * unit_ball_volume(3)), 1.0 / 3.0);
      break;
    }
    case Family::RandomRegular: {
      std::size_t d = draw_int(rng, 2, std::min<std::size_t>(10, n - 1));
      std::size_t nn = n;
      if ((nn * d) % 2) ++nn;
      P["n"] = static_cast<double>(nn);
      P["d"] = static_cast<double>(d);
      break;
    }
    case Family::BalancedTree: {
      const std::size_t r = draw_int(rng, 2, 5);
      auto nodes = [r](std::size_t h) {
        std::size_t t = 1, l = 1;
        for (std::size_t i = 0; i < h; ++i) t += (l *= r);
        return t;
      };
      P["r"] = static_cast<double>(r);
      P["h"] = static_cast<double>(std::max<std::size_t>(1, pick_level(rng, prof.n_min, prof.n_max, 12, nodes)));
      break;
    }
    case Family::BinomialTree:
      P["order"] = static_cast<double>(std::max<std::size_t>(
          1, pick_level(rng, prof.n_min, prof.n_max, 16, [](std::size_t k) { return std::size_t{1} << k; })));
      break;
    case Family::FullRaryTree:
      P["r"] = static_cast<double>(draw_int(rng, 2, 5));
      P["n"] = dn;
      break;
    case Family::CircularLadder:
      P["k"] = static_cast<double>(std::max<std::size_t>(3, n / 2));
      break;
    case Family::ChordalCycle:
      P["p"] = static_cast<double>(next_prime(std::max<std::size_t>(n, 5)));
      break;
    case Family::Barbell: {
      const std::size_t k = draw_int(rng, 3, std::min<std::size_t>(10, n / 2));
      P["k"] = static_cast<double>(k);
      P["path"] = static_cast<double>(n > 2 * k ? n - 2 * k : 0);
      break;
    }
    case Family::Lollipop: {
      const std::size_t k = draw_int(rng, 3, std::min<std::size_t>(10, n - 1));
      P["k"] = static_cast<double>(k);
      P["path"] = static_cast<double>(n - k);
      break;
    }
    case Family::Dgm:
      P["n"] = static_cast<double>(std::max<std::size_t>(1, pick_level(rng, prof.n_min, prof.n_max, 8, [](std::size_t g) {
        std::size_t p = 1;
        for (std::size_t i = 0; i < g; ++i) p *= 3;
        return 3 * (p + 1) / 2;
      })));
      break;
    case Family::SquareLattice: {
      const auto side = static_cast<std::size_t>(std::cbrt(dn));
      const std::size_t a = draw_int(rng, 2, side + 1), b = draw_int(rng, 2, side + 1);
      P["a"] = static_cast<double>(a);
      P["b"] = static_cast<double>(b);
      P["c"] = static_cast<double>(std::max<std::size_t>(2, n / (a * b)));
      break;
    }
    case Family::HexagonalLattice: {
      // nodes ~ 2 (rows + 1)(cols + 1)
      const auto half = std::max<std::size_t>(4, n / 2);
      const std::size_t rows = draw_int(rng, 2, std::max<std::size_t>(2, static_cast<std::size_t>(std::sqrt(half))));
      std::size_t cols = std::max<std::size_t>(2, half / (rows + 1) - 1);
      const bool periodic = false;
      P["rows"] = static_cast<double>(rows);
      P["cols"] = static_cast<double>(cols);
      P["periodic"] = periodic ? 1.0 : 0.0;
      break;
    }
    case Family::TriangularLattice: {
      const auto side = static_cast<std::size_t>(std::sqrt(dn));
      const std::size_t rows = draw_int(rng, 2, std::max<std::size_t>(2, side));
      P["rows"] = static_cast<double>(rows);
      P["cols"] = static_cast<double>(std::max<std::size_t>(2, n / rows));
      P["periodic"] = 0.0;
      break;
    }
    case Family::Star:
      P["k"] = dn - 1.0;
      break;
  }
  if (is_deterministic(family)) P["rewire"] = uniform_index(rng, 2) == 0 ? prof.rewire_fraction : 0.0;
  return s;
}

std::map<Family, std::vector<ReferenceProfile>> nearest_family_reference_profiles(
    std::span<const DatasetRecord> dataset) {
  std::map<Family, std::vector<ReferenceProfile>> index;
  for (const auto& r : dataset) index[r.family].push_back({r.id, r.sp});
  for (auto& [f, list] : index)
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return index;
}

}  // namespace motifsp
