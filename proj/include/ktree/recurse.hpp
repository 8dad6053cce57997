#pragma once

#include "ktree/cliques.hpp"
#include "ktree/error.hpp"
#include "ktree/ktree.hpp"
#include "ktree/number.hpp"
#include "ktree/oracle.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ktree::recurse {

/// The clique/block containment tree of a k-tree, rooted at one k-clique.
///
/// Every block other than those containing the root is reached through one
/// parent face; its apex is the block vertex missing from that face. The k
/// other faces are its children.
class Rooting {
 public:
  Rooting(const CliqueComplex& complex, int root)
      : root_(root),
        clique_parent_(complex.clique_count(), -1),
        clique_children_(complex.clique_count()),
        block_parent_(complex.block_count(), -1),
        block_apex_(complex.block_count(), -1),
        block_children_(complex.block_count()) {
    order_.reserve(complex.clique_count());
    order_.push_back(root);
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const int x = order_[head];
      for (int b : complex.blocks_of(x)) {
        if (b == clique_parent_[x]) continue;
        clique_children_[x].push_back(b);
        block_parent_[b] = x;
        block_apex_[b] = complex.opposite(b, x);
        for (int y : complex.faces(b)) {
          if (y == x) continue;
          block_children_[b].push_back(y);
          clique_parent_[y] = b;
          order_.push_back(y);
        }
      }
    }
  }

  int root() const { return root_; }
  // k-cliques in breadth-first order from the root.
  const std::vector<int>& order() const { return order_; }
  int parent_block(int clique) const { return clique_parent_[clique]; }
  const std::vector<int>& child_blocks(int clique) const { return clique_children_[clique]; }
  int parent_clique(int block) const { return block_parent_[block]; }
  Vertex apex(int block) const { return block_apex_[block]; }
  const std::vector<int>& child_cliques(int block) const { return block_children_[block]; }

 private:
  int root_;
  std::vector<int> order_;
  std::vector<int> clique_parent_;
  std::vector<std::vector<int>> clique_children_;
  std::vector<int> block_parent_;
  std::vector<Vertex> block_apex_;
  std::vector<std::vector<int>> block_children_;
};

/// Exact counts for the sub-k-tree hanging below each k-clique of a rooting:
/// for clique X with subtree T_X,
///   count[X]      = N(T_X; X)
///   extra[X]      = R(T_X; X) - k N(T_X; X)    (total vertices beyond X)
///   avoid_count[X], avoid_sum[X] = N̄(T_X; X), R̄(T_X; X).
///
/// With branches i (apex v_i, children C_{i,j}) and P_i = prod_j N_{i,j}:
///   N = prod_i (1 + P_i),
///   N̄ = sum_{i,j} (N_{i,j} + N̄_{i,j}),  R̄ = sum_{i,j} (R_{i,j} + R̄_{i,j}).
/// The published mean recursion
///   mu•(T;C) = sum_i (1 + sum_j mu•_{i,j}) / (1 + prod_j N_{i,j}^{-1})
/// is carried here as integer pairs (N, N·mu•) so no division happens.
struct RootedTable {
  std::vector<Natural> count;
  std::vector<Natural> extra;
  std::vector<Natural> avoid_count;
  std::vector<Natural> avoid_sum;

  Natural order_sum(int clique, int k) const { return count[clique] * k + extra[clique]; }
};

inline RootedTable tabulate(const CliqueComplex& complex, const Rooting& rooting) {
  const std::size_t cliques = complex.clique_count();
  const int k = complex.k();
  RootedTable table;
  table.count.assign(cliques, Natural(1));
  table.extra.assign(cliques, Natural(0));
  table.avoid_count.assign(cliques, Natural(0));
  table.avoid_sum.assign(cliques, Natural(0));
  const auto& order = rooting.order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int x = *it;
    Natural count = 1, extra = 0, avoid_count = 0, avoid_sum = 0;
    for (int b : rooting.child_blocks(x)) {
      Natural product = 1, product_extra = 0;
      for (int y : rooting.child_cliques(b)) {
        product_extra = product_extra * table.count[y] + table.extra[y] * product;
        product *= table.count[y];
        avoid_count += table.count[y] + table.avoid_count[y];
        avoid_sum += table.order_sum(y, k) + table.avoid_sum[y];
      }
      // Either the apex is absent (one way, nothing added) or present with any
      // combination of child extensions.
      const Natural branch_count = product + 1;
      const Natural branch_extra = product_extra + product;
      extra = extra * branch_count + branch_extra * count;
      count *= branch_count;
    }
    table.count[x] = std::move(count);
    table.extra[x] = std::move(extra);
    table.avoid_count[x] = std::move(avoid_count);
    table.avoid_sum[x] = std::move(avoid_sum);
  }
  return table;
}

inline int require_clique(const CliqueComplex& complex, const KClique& c) {
  auto id = complex.find(c);
  if (!id) throw InvalidArgument(c.str() + " is not a k-clique of the instance");
  return *id;
}

struct LocalCounts {
  Natural count;      // N(T;C)
  Natural order_sum;  // R(T;C)
  bool operator==(const LocalCounts&) const = default;
};

struct ComplementCounts {
  Natural count;      // N̄(T;C)
  Natural order_sum;  // R̄(T;C)
  bool operator==(const ComplementCounts&) const = default;
};

inline LocalCounts local_counts_recursive(const KTree& tree, const KClique& c) {
  CliqueComplex complex(tree);
  const int root = require_clique(complex, c);
  RootedTable table = tabulate(complex, Rooting(complex, root));
  return LocalCounts{table.count[root], table.order_sum(root, tree.k())};
}

inline ComplementCounts complement_counts_recursive(const KTree& tree, const KClique& c) {
  CliqueComplex complex(tree);
  const int root = require_clique(complex, c);
  RootedTable table = tabulate(complex, Rooting(complex, root));
  return ComplementCounts{table.avoid_count[root], table.avoid_sum[root]};
}

/// Clique-scope statistics for clique `id`, both containing and avoiding.
inline SubtreeStats local_stats(const CliqueComplex& complex, int id) {
  RootedTable table = tabulate(complex, Rooting(complex, id));
  const int k = complex.k();
  return oracle::finish(table.count[id], table.order_sum(id, k), table.avoid_count[id],
                        table.avoid_sum[id], k);
}

inline SubtreeStats local_stats(const KTree& tree, const KClique& c) {
  CliqueComplex complex(tree);
  return local_stats(complex, require_clique(complex, c));
}

/// Local statistics at every k-clique, indexed like complex.cliques().
inline std::vector<SubtreeStats> all_local_stats(const CliqueComplex& complex) {
  std::vector<SubtreeStats> out;
  out.reserve(complex.clique_count());
  for (std::size_t id = 0; id < complex.clique_count(); ++id) {
    out.push_back(local_stats(complex, static_cast<int>(id)));
  }
  return out;
}

/// Global statistics from one clique's containing and avoiding counts:
/// N(T) = N(T;C) + N̄(T;C), R(T) = R(T;C) + R̄(T;C). Any clique gives the same
/// result; the base clique is used unless one is named.
inline SubtreeStats global_stats_fast(const KTree& tree,
                                      const std::optional<KClique>& via = std::nullopt) {
  CliqueComplex complex(tree);
  const int root = via ? require_clique(complex, *via) : 0;
  RootedTable table = tabulate(complex, Rooting(complex, root));
  Natural count = table.count[root] + table.avoid_count[root];
  Natural sum = table.order_sum(root, tree.k()) + table.avoid_sum[root];
  return oracle::finish(std::move(count), std::move(sum), Natural(0), Natural(0), 0);
}

/// Statistics in global or clique scope via the recursion. Vertex scope is
/// not covered by the decomposition and raises InvalidArgument.
inline SubtreeStats stats(const KTree& tree, const Scope& scope) {
  oracle::validate_scope(tree, scope);
  if (std::holds_alternative<GlobalScope>(scope)) return global_stats_fast(tree);
  if (auto* c = std::get_if<CliqueScope>(&scope)) return local_stats(tree, c->clique);
  throw InvalidArgument("the recursive engine has no vertex scope; use the oracle");
}

// ---------------------------------------------------------------------------
// Decomposition at a clique

struct Branch {
  Vertex apex = -1;                            // v_i
  KClique block;                               // B_i = C + v_i
  std::vector<KClique> cliques;                // C_{i,1..k}, lexicographic
  std::vector<std::vector<Vertex>> vertices;   // V(T_{i,j}), sorted
};

struct Decomposition {
  KClique center;
  std::vector<Branch> branches;  // ordered by apex

  std::size_t degree() const { return branches.size(); }
};

namespace detail {

inline std::vector<Vertex> subtree_vertices(const CliqueComplex& complex, const Rooting& rooting,
                                            int clique) {
  std::vector<Vertex> out = complex.clique(clique).vertices();
  std::vector<int> stack{clique};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int b : rooting.child_blocks(x)) {
      out.push_back(rooting.apex(b));
      for (int y : rooting.child_cliques(b)) stack.push_back(y);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Splits `tree` at clique `c` into its branches B_i = C + v_i and the
/// sub-k-trees T_{i,j} rooted at the other k-subcliques C_{i,j} of B_i. A vertex
/// u outside C belongs to T_{i,j} iff the path from C to u's block in the
/// containment tree passes through C_{i,j}.
inline Decomposition decompose(const KTree& tree, const KClique& c) {
  CliqueComplex complex(tree);
  const int root = require_clique(complex, c);
  Rooting rooting(complex, root);
  Decomposition out;
  out.center = c;
  for (int b : rooting.child_blocks(root)) {
    Branch branch;
    branch.apex = rooting.apex(b);
    std::vector<Vertex> ids = c.vertices();
    ids.push_back(branch.apex);
    branch.block = KClique(std::move(ids));
    std::vector<int> children = rooting.child_cliques(b);
    std::sort(children.begin(), children.end(),
              [&](int x, int y) { return complex.clique(x) < complex.clique(y); });
    for (int y : children) {
      branch.cliques.push_back(complex.clique(y));
      branch.vertices.push_back(detail::subtree_vertices(complex, rooting, y));
    }
    out.branches.push_back(std::move(branch));
  }
  std::sort(out.branches.begin(), out.branches.end(),
            [](const Branch& x, const Branch& y) { return x.apex < y.apex; });
  return out;
}

// ---------------------------------------------------------------------------
// 1-characteristic tree

/// Node 0 stands for the clique C; node i >= 1 for vertex_of_node[i], the i-th
/// vertex outside C in increasing id order. Edges join each vertex to the
/// vertex preceding it on its path-type route from C.
struct CharacteristicTree {
  KClique root;
  std::vector<Vertex> vertex_of_node;  // [0] is -1
  std::vector<Edge> edges;             // node pairs (parent, child)

  int node_count() const { return static_cast<int>(vertex_of_node.size()); }

  std::vector<int> degrees() const {
    std::vector<int> deg(vertex_of_node.size(), 0);
    for (auto [u, v] : edges) {
      ++deg[u];
      ++deg[v];
    }
    return deg;
  }

  // No node of degree 2.
  bool is_series_reduced() const {
    for (int d : degrees()) {
      if (d == 2) return false;
    }
    return true;
  }

  /// The tree as a 1-tree whose vertex 0 is the root node. Vertices are
  /// numbered in breadth-first order from the root.
  KTree to_ktree() const {
    const int n = node_count();
    std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
    for (auto [parent, child] : edges) children[parent].push_back(child);
    for (auto& c : children) std::sort(c.begin(), c.end());
    std::vector<int> bfs{0};
    std::vector<int> new_id(static_cast<std::size_t>(n), -1);
    new_id[0] = 0;
    std::vector<KClique> attachments;
    for (std::size_t head = 0; head < bfs.size(); ++head) {
      for (int child : children[bfs[head]]) {
        new_id[child] = static_cast<int>(bfs.size());
        bfs.push_back(child);
        attachments.push_back(KClique{new_id[bfs[head]]});
      }
    }
    return KTree(1, std::move(attachments));
  }

  std::string to_dot() const {
    std::ostringstream out;
    out << "graph characteristic_tree {\n";
    out << "  0 [label=\"C=" << root.str() << "\", shape=box];\n";
    for (int i = 1; i < node_count(); ++i) {
      out << "  " << i << " [label=\"" << vertex_of_node[i] << "\"];\n";
    }
    for (auto [u, v] : edges) out << "  " << u << " -- " << v << ";\n";
    out << "}\n";
    return out.str();
  }
};

inline CharacteristicTree characteristic_tree(const KTree& tree, const KClique& c) {
  CliqueComplex complex(tree);
  const int root = require_clique(complex, c);
  Rooting rooting(complex, root);
  CharacteristicTree out;
  out.root = c;
  out.vertex_of_node.push_back(-1);
  std::vector<int> node_of(static_cast<std::size_t>(tree.order()), 0);
  for (Vertex v = 0; v < tree.order(); ++v) {
    if (c.contains(v)) continue;
    node_of[v] = static_cast<int>(out.vertex_of_node.size());
    out.vertex_of_node.push_back(v);
  }
  for (std::size_t b = 0; b < complex.block_count(); ++b) {
    const int face = rooting.parent_clique(static_cast<int>(b));
    const int grand = rooting.parent_block(face);
    const int parent_node = grand < 0 ? 0 : node_of[rooting.apex(grand)];
    out.edges.emplace_back(parent_node, node_of[rooting.apex(static_cast<int>(b))]);
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

}  // namespace ktree::recurse
