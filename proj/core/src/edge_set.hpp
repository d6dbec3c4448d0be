#pragma once

#include <algorithm>
#include <cstddef>
#include <unordered_map>
#include <vector>

#include "motifsp/graph.hpp"

namespace motifsp::detail {

/// Mutable simple-edge set with O(1) uniform sampling, lookup and removal.
/// Edges are stored with u < v.
class EdgeSet {
 public:
  explicit EdgeSet(std::vector<Edge> edges) : edges_(std::move(edges)) {
    index_.reserve(edges_.size() * 2);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      auto& e = edges_[i];
      if (e.u > e.v) std::swap(e.u, e.v);
      index_.emplace(key(e.u, e.v), i);
    }
  }

  std::size_t size() const noexcept { return edges_.size(); }
  const Edge& at(std::size_t i) const noexcept { return edges_[i]; }

  bool contains(NodeId a, NodeId b) const { return index_.count(key(a, b)) != 0; }

  /// False when the edge is already present.
  bool insert(NodeId a, NodeId b) {
    Edge e{std::min(a, b), std::max(a, b)};
    auto [it, fresh] = index_.emplace(key(e.u, e.v), edges_.size());
    if (!fresh) return false;
    edges_.push_back(e);
    return true;
  }

  void erase(NodeId a, NodeId b) {
    auto it = index_.find(key(a, b));
    if (it == index_.end()) return;
    std::size_t i = it->second;
    index_.erase(it);
    if (i + 1 != edges_.size()) {
      edges_[i] = edges_.back();
      index_[key(edges_[i].u, edges_[i].v)] = i;
    }
    edges_.pop_back();
  }

  /// Replaces the edge stored at slot i in place (keeps sampling order stable).
  void replace(std::size_t i, NodeId a, NodeId b) {
    index_.erase(key(edges_[i].u, edges_[i].v));
    edges_[i] = {std::min(a, b), std::max(a, b)};
    index_[key(edges_[i].u, edges_[i].v)] = i;
  }

  std::vector<Edge> sorted_edges() const {
    auto out = edges_;
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Key {
    NodeId u, v;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::size_t h = k.u * 0x9e3779b97f4a7c15ULL;
      h ^= k.v + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
      return h;
    }
  };
  static Key key(NodeId a, NodeId b) noexcept { return a < b ? Key{a, b} : Key{b, a}; }

  std::vector<Edge> edges_;
  std::unordered_map<Key, std::size_t, KeyHash> index_;
};

}  // namespace motifsp::detail
