#pragma once

#include "ktree/error.hpp"
#include "ktree/graph.hpp"

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ktree {

// A set of vertex ids kept strictly increasing.
class KClique {
 public:
  KClique() = default;
  KClique(std::initializer_list<Vertex> ids) : KClique(std::vector<Vertex>(ids)) {}
  explicit KClique(std::vector<Vertex> ids) : vertices_(std::move(ids)) {
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end()) {
      throw InvalidArgument("clique lists a vertex twice");
    }
  }

  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  auto begin() const { return vertices_.begin(); }
  auto end() const { return vertices_.end(); }
  Vertex operator[](std::size_t i) const { return vertices_[i]; }
  const std::vector<Vertex>& vertices() const { return vertices_; }

  bool contains(Vertex v) const { return std::binary_search(vertices_.begin(), vertices_.end(), v); }

  // This clique with `drop` replaced by `add`.
  KClique swapped(Vertex drop, Vertex add) const {
    std::vector<Vertex> ids;
    ids.reserve(vertices_.size());
    for (Vertex v : vertices_) {
      if (v != drop) ids.push_back(v);
    }
    ids.push_back(add);
    return KClique(std::move(ids));
  }

  std::string str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(vertices_[i]);
    }
    return out + "}";
  }

  auto operator<=>(const KClique&) const = default;
  bool operator==(const KClique&) const = default;

 private:
  std::vector<Vertex> vertices_;
};

/// A k-tree given by its construction sequence: vertices 0..k-1 form the base
/// K_k and vertex k+t is joined to the k-clique attachments()[t].
///
/// Instances are immutable; the constructor validates every attachment
/// (size k, only earlier vertices, pairwise adjacent).
class KTree {
 public:
  KTree(int k, std::vector<KClique> attachments) : k_(k), attachments_(std::move(attachments)) {
    if (k_ < 1) throw InvalidArgument("k must be positive");
    const int n = order();
    std::vector<std::vector<Vertex>> adjacency(static_cast<std::size_t>(n));
    for (Vertex u = 0; u < k_; ++u) {
      for (Vertex v = 0; v < k_; ++v) {
        if (u != v) adjacency[u].push_back(v);
      }
    }
    auto adjacent = [&](Vertex u, Vertex v) {
      return std::binary_search(adjacency[u].begin(), adjacency[u].end(), v);
    };
    for (std::size_t t = 0; t < attachments_.size(); ++t) {
      const Vertex fresh = k_ + static_cast<Vertex>(t);
      const KClique& target = attachments_[t];
      if (static_cast<int>(target.size()) != k_) {
        throw MalformedInput("attachment of vertex " + std::to_string(fresh) + " has " +
                             std::to_string(target.size()) + " vertices, expected " +
                             std::to_string(k_));
      }
      for (Vertex v : target) {
        if (v < 0 || v >= fresh) {
          throw MalformedInput("attachment of vertex " + std::to_string(fresh) +
                               " references vertex " + std::to_string(v) +
                               " which is not yet present");
        }
      }
      for (std::size_t i = 0; i < target.size(); ++i) {
        for (std::size_t j = i + 1; j < target.size(); ++j) {
          if (!adjacent(target[i], target[j])) {
            throw MalformedInput("attachment " + target.str() + " of vertex " +
                                 std::to_string(fresh) + " is not a clique");
          }
        }
      }
      for (Vertex v : target) {
        adjacency[v].push_back(fresh);  // fresh exceeds every existing id: stays sorted
        adjacency[fresh].push_back(v);
      }
    }
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v : adjacency[u]) {
        if (u < v) edges.emplace_back(u, v);
      }
    }
    graph_ = Graph(n, edges);
  }

  int k() const { return k_; }
  int order() const { return k_ + static_cast<int>(attachments_.size()); }
  const std::vector<KClique>& attachments() const { return attachments_; }
  const Graph& graph() const { return graph_; }

  std::size_t degree(Vertex v) const { return graph_.degree(v); }
  bool adjacent(Vertex u, Vertex v) const { return graph_.adjacent(u, v); }
  std::size_t edge_count() const { return graph_.edge_count(); }

  // Vertices of degree exactly k (the k-leaves). K_k itself has none.
  std::vector<Vertex> leaves() const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < order(); ++v) {
      if (static_cast<int>(degree(v)) == k_) out.push_back(v);
    }
    return out;
  }

  // The (k+1)-clique created by attachment t.
  KClique block(std::size_t t) const {
    std::vector<Vertex> ids = attachments_[t].vertices();
    ids.push_back(k_ + static_cast<Vertex>(t));
    return KClique(std::move(ids));
  }

  KClique base_clique() const {
    std::vector<Vertex> ids(static_cast<std::size_t>(k_));
    std::iota(ids.begin(), ids.end(), 0);
    return KClique(std::move(ids));
  }

  bool is_clique(const KClique& c) const { return graph_.is_clique(c.vertices()); }

  bool operator==(const KTree& other) const {
    return k_ == other.k_ && attachments_ == other.attachments_;
  }

 private:
  int k_;
  std::vector<KClique> attachments_;
  Graph graph_;
};

/// Result of relabeling an arbitrary k-tree graph into construction order.
struct Relabeled {
  KTree tree;
  std::vector<Vertex> new_id;  // original vertex -> id in `tree`
};

/// Builds a KTree from any graph that is a k-tree. The surviving base clique of
/// the elimination becomes vertices 0..k-1 (in increasing original id) and the
/// reversed elimination order supplies the remaining ids.
/// Throws MalformedInput if the graph is not a k-tree.
inline Relabeled from_graph(const Graph& graph, int k) {
  Recognition rec = recognize_ktree(graph, k);
  if (!rec.is_ktree) throw MalformedInput("graph is not a " + std::to_string(k) + "-tree");
  const int n = graph.order();
  std::vector<Vertex> new_id(static_cast<std::size_t>(n), -1);
  Vertex next = 0;
  for (Vertex v : rec.base) new_id[v] = next++;
  std::vector<char> present(static_cast<std::size_t>(n), 0);
  for (Vertex v : rec.base) present[v] = 1;
  std::vector<KClique> attachments;
  for (auto it = rec.elimination_order.rbegin(); it != rec.elimination_order.rend(); ++it) {
    std::vector<Vertex> target;
    for (Vertex u : graph.neighbors(*it)) {
      if (present[u]) target.push_back(new_id[u]);
    }
    attachments.emplace_back(std::move(target));
    present[*it] = 1;
    new_id[*it] = next++;
  }
  return Relabeled{KTree(k, std::move(attachments)), std::move(new_id)};
}

inline Relabeled from_edges(int k, int order, std::span<const Edge> edges) {
  return from_graph(Graph(order, edges), k);
}

}  // namespace ktree
