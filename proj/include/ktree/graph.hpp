#pragma once

#include "ktree/error.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ktree {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

// Simple undirected graph on vertices 0..order-1 with sorted neighbor lists.
class Graph {
 public:
  Graph() = default;

  // Throws MalformedInput on out-of-range endpoints, self-loops or repeated edges.
  Graph(int order, std::span<const Edge> edges) : adjacency_(static_cast<std::size_t>(order)) {
    if (order < 0) throw MalformedInput("negative vertex count");
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= order || v >= order) {
        throw MalformedInput("edge {" + std::to_string(u) + "," + std::to_string(v) +
                             "} references a vertex outside 0.." + std::to_string(order - 1));
      }
      if (u == v) throw MalformedInput("self-loop at vertex " + std::to_string(u));
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
    }
    for (auto& row : adjacency_) {
      std::sort(row.begin(), row.end());
      if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
        throw MalformedInput("repeated edge (multigraph input)");
      }
    }
    edge_count_ = edges.size();
  }

  int order() const { return static_cast<int>(adjacency_.size()); }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_[v]; }

  bool adjacent(Vertex u, Vertex v) const {
    const auto& row = adjacency_[u];
    return std::binary_search(row.begin(), row.end(), v);
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < order(); ++u) {
      for (Vertex v : adjacency_[u]) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  bool is_clique(std::span<const Vertex> vertices) const {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      for (std::size_t j = i + 1; j < vertices.size(); ++j) {
        if (!adjacent(vertices[i], vertices[j])) return false;
      }
    }
    return true;
  }

  // Adjacency rows as bitmasks. Requires order() <= 64.
  std::vector<std::uint64_t> masks() const {
    if (order() > 64) throw BudgetExceeded("bitmask view needs at most 64 vertices");
    std::vector<std::uint64_t> out(adjacency_.size(), 0);
    for (Vertex u = 0; u < order(); ++u) {
      for (Vertex v : adjacency_[u]) out[u] |= std::uint64_t{1} << v;
    }
    return out;
  }

 private:
  std::vector<std::vector<Vertex>> adjacency_;
  std::size_t edge_count_ = 0;
};

struct Recognition {
  bool is_ktree = false;
  // Vertices in removal order; each is simplicial of degree k in what remains.
  // Empty when recognition fails or the graph is K_k.
  std::vector<Vertex> elimination_order;
  // The k vertices left at the end (sorted), when recognition succeeds.
  std::vector<Vertex> base;
};

/// Decides whether `graph` is a k-tree by repeatedly deleting a degree-k vertex
/// whose neighborhood is a clique. Any such vertex may be removed greedily:
/// G is a k-tree iff G - v is, whenever v is simplicial of degree k.
inline Recognition recognize_ktree(const Graph& graph, int k) {
  Recognition result;
  const int n = graph.order();
  if (k < 1 || n < k) return result;
  const long long expected_edges =
      static_cast<long long>(k) * n - static_cast<long long>(k) * (k + 1) / 2;
  if (static_cast<long long>(graph.edge_count()) != expected_edges) return result;

  std::vector<int> degree(n);
  std::vector<char> removed(n, 0);
  std::vector<Vertex> worklist;
  for (Vertex v = 0; v < n; ++v) {
    degree[v] = static_cast<int>(graph.degree(v));
    if (degree[v] == k) worklist.push_back(v);
  }

  int remaining = n;
  std::vector<Vertex> live;
  while (remaining > k) {
    if (worklist.empty()) return Recognition{};
    Vertex v = worklist.back();
    worklist.pop_back();
    if (removed[v] || degree[v] != k) continue;
    live.clear();
    for (Vertex u : graph.neighbors(v)) {
      if (!removed[u]) live.push_back(u);
    }
    // A degree-k vertex of a k-tree on more than k+1 vertices is simplicial,
    // so a non-clique neighborhood is a certificate of failure.
    if (!graph.is_clique(live)) return Recognition{};
    removed[v] = 1;
    --remaining;
    result.elimination_order.push_back(v);
    for (Vertex u : live) {
      if (--degree[u] == k) worklist.push_back(u);
    }
  }
  // The edge-count identity forces the k survivors to be complete.
  for (Vertex v = 0; v < n; ++v) {
    if (!removed[v]) result.base.push_back(v);
  }
  result.is_ktree = true;
  return result;
}

namespace detail {

inline bool mask_is_clique(std::span<const std::uint64_t> adjacency, std::uint64_t set) {
  for (std::uint64_t rest = set; rest != 0; rest &= rest - 1) {
    int u = std::countr_zero(rest);
    std::uint64_t others = set & ~(std::uint64_t{1} << u);
    if ((adjacency[u] & others) != others) return false;
  }
  return true;
}

}  // namespace detail

/// Same elimination test as recognize_ktree, on the subgraph induced by `subset`.
inline bool is_ktree_induced(std::span<const std::uint64_t> adjacency, std::uint64_t subset,
                             int k) {
  const int m = std::popcount(subset);
  if (m < k) return false;
  long long twice_edges = 0;
  for (std::uint64_t rest = subset; rest != 0; rest &= rest - 1) {
    twice_edges += std::popcount(adjacency[std::countr_zero(rest)] & subset);
  }
  if (twice_edges != 2LL * k * m - static_cast<long long>(k) * (k + 1)) return false;

  std::uint64_t current = subset;
  int remaining = m;
  while (remaining > k) {
    bool progressed = false;
    for (std::uint64_t rest = current; rest != 0 && remaining > k; rest &= rest - 1) {
      int v = std::countr_zero(rest);
      std::uint64_t nbrs = adjacency[v] & current;
      if (std::popcount(nbrs) != k || !detail::mask_is_clique(adjacency, nbrs)) continue;
      current &= ~(std::uint64_t{1} << v);
      --remaining;
      progressed = true;
    }
    if (!progressed) return false;
  }
  return true;
}

}  // namespace ktree
