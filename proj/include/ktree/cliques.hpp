#pragma once

#include "ktree/ktree.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace ktree {

/// Inventory of the k-cliques and (k+1)-cliques ("blocks") of a k-tree.
///
/// k-clique 0 is the base clique; attachment t creates block t and k new
/// k-cliques. The bipartite containment graph between k-cliques and blocks is a
/// tree: it has 1 + k(n-k) + (n-k) nodes and (k+1)(n-k) edges and is connected.
class CliqueComplex {
 public:
  explicit CliqueComplex(const KTree& tree) : k_(tree.k()) {
    add(tree.base_clique());
    const auto& attachments = tree.attachments();
    blocks_.reserve(attachments.size());
    for (std::size_t t = 0; t < attachments.size(); ++t) {
      const Vertex fresh = k_ + static_cast<Vertex>(t);
      const KClique& target = attachments[t];
      std::vector<int> faces;
      faces.reserve(static_cast<std::size_t>(k_) + 1);
      faces.push_back(index_.at(target));
      for (Vertex drop : target) faces.push_back(add(target.swapped(drop, fresh)));
      for (int face : faces) containing_[face].push_back(static_cast<int>(t));
      blocks_.push_back(Block{fresh, std::move(faces)});
    }
  }

  int k() const { return k_; }
  std::size_t clique_count() const { return cliques_.size(); }
  std::size_t block_count() const { return blocks_.size(); }

  const KClique& clique(int id) const { return cliques_[id]; }
  const std::vector<KClique>& cliques() const { return cliques_; }

  std::optional<int> find(const KClique& c) const {
    auto it = index_.find(c);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Number of (k+1)-cliques containing k-clique `id`.
  int degree(int id) const { return static_cast<int>(containing_[id].size()); }

  // Blocks containing k-clique `id`.
  const std::vector<int>& blocks_of(int id) const { return containing_[id]; }

  // The k+1 k-clique ids inside block `b`.
  const std::vector<int>& faces(int b) const { return blocks_[b].faces; }

  // Vertex created together with block `b` (its construction apex).
  Vertex block_vertex(int b) const { return blocks_[b].fresh; }

  // The vertex of block `b` missing from its face `face`.
  Vertex opposite(int b, int face) const {
    const auto& ids = blocks_[b].faces;
    // faces[0] is the attachment (misses `fresh`); faces[i] misses attachment vertex i-1.
    if (ids[0] == face) return blocks_[b].fresh;
    const KClique& attach = cliques_[ids[0]];
    for (std::size_t i = 1; i < ids.size(); ++i) {
      if (ids[i] == face) return attach[i - 1];
    }
    throw InvalidArgument("clique is not a face of the block");
  }

 private:
  struct Block {
    Vertex fresh;
    std::vector<int> faces;
  };

  int add(KClique c) {
    int id = static_cast<int>(cliques_.size());
    index_.emplace(c, id);
    cliques_.push_back(std::move(c));
    containing_.emplace_back();
    return id;
  }

  int k_;
  std::vector<KClique> cliques_;
  std::vector<std::vector<int>> containing_;
  std::vector<Block> blocks_;
  std::map<KClique, int> index_;
};

/// Every k-clique of `tree` exactly once, paired with its degree.
inline std::vector<std::pair<KClique, int>> k_cliques_with_degree(const KTree& tree) {
  CliqueComplex complex(tree);
  std::vector<std::pair<KClique, int>> out;
  out.reserve(complex.clique_count());
  for (std::size_t id = 0; id < complex.clique_count(); ++id) {
    out.emplace_back(complex.clique(static_cast<int>(id)), complex.degree(static_cast<int>(id)));
  }
  return out;
}

// A k-clique is simplicial when it contains a k-leaf.
inline bool is_simplicial(const KTree& tree, const KClique& c) {
  for (Vertex v : c) {
    if (static_cast<int>(tree.degree(v)) == tree.k()) return true;
  }
  return false;
}

// No k-clique of degree 2.
inline bool is_series_reduced(const CliqueComplex& complex) {
  for (std::size_t id = 0; id < complex.clique_count(); ++id) {
    if (complex.degree(static_cast<int>(id)) == 2) return false;
  }
  return true;
}

// K_k, K_{k+1}, or exactly two k-leaves.
inline bool is_path_type(const KTree& tree) {
  return tree.order() <= tree.k() + 1 || tree.leaves().size() == 2;
}

}  // namespace ktree
