#pragma once

#include "ktree/canonical.hpp"
#include "ktree/cliques.hpp"
#include "ktree/error.hpp"
#include "ktree/ktree.hpp"
#include "ktree/parallel.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace ktree::families {

namespace detail {

inline KClique window(Vertex first, int k) {
  std::vector<Vertex> ids(static_cast<std::size_t>(k));
  std::iota(ids.begin(), ids.end(), first);
  return KClique(std::move(ids));
}

inline void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

}  // namespace detail

/// Every added vertex joins the base clique {0..k-1}.
inline KTree make_k_star(int k, int n) {
  detail::require(k >= 1, "k must be positive");
  detail::require(n >= k, "k-star needs n >= k");
  return KTree(k, std::vector<KClique>(static_cast<std::size_t>(n - k), detail::window(0, k)));
}

/// The canonical path-type k-tree P^{k+1}: vertex k+t joins the k most recent vertices.
inline KTree make_k_path(int k, int n) {
  detail::require(k >= 1, "k must be positive");
  detail::require(n >= k, "k-path needs n >= k");
  std::vector<KClique> attachments;
  for (int t = 0; t < n - k; ++t) attachments.push_back(detail::window(t, k));
  return KTree(k, std::move(attachments));
}

/// A k-path on `handle` vertices whose last k vertices receive `bristles` extra k-leaves.
inline KTree make_k_broom(int k, int handle, int bristles) {
  detail::require(k >= 1, "k must be positive");
  detail::require(handle >= k, "k-broom handle needs at least k vertices");
  detail::require(bristles >= 0, "k-broom bristle count must be non-negative");
  std::vector<KClique> attachments = make_k_path(k, handle).attachments();
  const KClique end = detail::window(handle - k, k);
  for (int i = 0; i < bristles; ++i) attachments.push_back(end);
  return KTree(k, std::move(attachments));
}

/// Stem P^{k+1} on `stem` vertices, one k-leaf on each window of k consecutive
/// stem vertices, plus one more k-leaf on each of the first and last windows.
/// Order 2*stem + 3 - k with stem - k + 3 k-leaves.
inline KTree make_k_caterpillar(int k, int stem) {
  detail::require(k >= 1, "k must be positive");
  detail::require(stem >= k + 1, "k-caterpillar needs a stem of at least k+1 vertices");
  std::vector<KClique> attachments = make_k_path(k, stem).attachments();
  for (int first = 0; first + k <= stem; ++first) attachments.push_back(detail::window(first, k));
  attachments.push_back(detail::window(0, k));
  attachments.push_back(detail::window(stem - k, k));
  return KTree(k, std::move(attachments));
}

enum class Family { Star, Path, Broom, Caterpillar };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::Star: return "star";
    case Family::Path: return "path";
    case Family::Broom: return "broom";
    case Family::Caterpillar: return "caterpillar";
  }
  return "?";
}

inline Family parse_family(const std::string& name) {
  if (name == "star") return Family::Star;
  if (name == "path") return Family::Path;
  if (name == "broom") return Family::Broom;
  if (name == "caterpillar") return Family::Caterpillar;
  throw InvalidArgument("unknown family '" + name + "' (star|path|broom|caterpillar)");
}

struct FamilySpec {
  Family family = Family::Star;
  int k = 1;
  int n = 1;         // star, path
  int handle = 1;    // broom: k-path length s; caterpillar: stem length s
  int bristles = 0;  // broom: leaf count m
};

inline KTree make(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::Star: return make_k_star(spec.k, spec.n);
    case Family::Path: return make_k_path(spec.k, spec.n);
    case Family::Broom: return make_k_broom(spec.k, spec.handle, spec.bristles);
    case Family::Caterpillar: return make_k_caterpillar(spec.k, spec.handle);
  }
  throw InvalidArgument("unknown family");
}

// ---------------------------------------------------------------------------
// Class predicates

// Whether every vertex outside `c` is adjacent to all of `c` (T is a k-star on base c).
inline bool is_star_on(const KTree& tree, const KClique& c) {
  for (Vertex v = 0; v < tree.order(); ++v) {
    if (c.contains(v)) continue;
    for (Vertex u : c) {
      if (!tree.adjacent(u, v)) return false;
    }
  }
  return true;
}

inline bool is_k_star(const KTree& tree) {
  const int n = tree.order();
  const int k = tree.k();
  return n <= k + 1 || static_cast<int>(tree.leaves().size()) == n - k;
}

/// A k-broom: a path-type k-tree plus extra k-leaves on one of its simplicial
/// k-cliques. Tested by stripping, for each k-clique D, the k-leaves whose
/// neighborhood is exactly D and checking that what remains is path-type with
/// D simplicial in it (or equal to D).
inline bool is_k_broom(const KTree& tree) {
  const int k = tree.k();
  if (is_path_type(tree)) return true;
  CliqueComplex complex(tree);
  const auto leaves = tree.leaves();
  for (const KClique& d : complex.cliques()) {
    std::vector<char> keep(static_cast<std::size_t>(tree.order()), 1);
    int stripped = 0;
    for (Vertex v : leaves) {
      const auto& nbrs = tree.graph().neighbors(v);
      if (nbrs == d.vertices()) {
        keep[v] = 0;
        ++stripped;
      }
    }
    if (stripped == 0) continue;
    std::vector<Vertex> new_id(static_cast<std::size_t>(tree.order()), -1);
    int next = 0;
    for (Vertex v = 0; v < tree.order(); ++v) {
      if (keep[v]) new_id[v] = next++;
    }
    std::vector<Edge> edges;
    for (auto [u, v] : tree.graph().edges()) {
      if (keep[u] && keep[v]) edges.emplace_back(new_id[u], new_id[v]);
    }
    Graph rest(next, edges);
    if (next == k) return true;  // remainder is D itself: a k-star
    int leaf_count = 0;
    bool d_simplicial = false;
    for (Vertex v = 0; v < next; ++v) {
      if (static_cast<int>(rest.degree(v)) == k) ++leaf_count;
    }
    for (Vertex v : d) {
      if (static_cast<int>(rest.degree(new_id[v])) == k) d_simplicial = true;
    }
    const bool rest_path_type = next <= k + 1 || leaf_count == 2;
    if (rest_path_type && d_simplicial) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Exhaustive generation

struct GenerationOptions {
  std::size_t class_budget = 1'000'000;  // per level
  unsigned workers = 1;
};

namespace detail {

using Classes = std::map<std::string, KTree>;

// All one-vertex extensions of `level`, deduplicated by canonical code.
inline std::vector<KTree> next_level(const std::vector<KTree>& level, int k,
                                     const GenerationOptions& options) {
  Classes merged = parallel_map_reduce(
      level.size(), options.workers, Classes{},
      [&](std::size_t i) {
        Classes found;
        const KTree& parent = level[i];
        CliqueComplex complex(parent);
        for (const KClique& c : complex.cliques()) {
          std::vector<KClique> attachments = parent.attachments();
          attachments.push_back(c);
          KTree child(k, std::move(attachments));
          std::string code = canonical_code(child);
          found.try_emplace(std::move(code), std::move(child));
        }
        return found;
      },
      [](Classes& acc, Classes part) {
        // Keep the lexicographically smallest labeling per class so the
        // representative does not depend on scheduling.
        for (auto& [code, tree] : part) {
          auto it = acc.find(code);
          if (it == acc.end()) {
            acc.emplace(code, std::move(tree));
          } else if (tree.attachments() < it->second.attachments()) {
            it->second = std::move(tree);
          }
        }
      });
  if (merged.size() > options.class_budget) {
    throw BudgetExceeded("generation of " + std::to_string(k) + "-trees on " +
                         std::to_string(level.empty() ? k : level.front().order() + 1) +
                         " vertices exceeds the class budget of " +
                         std::to_string(options.class_budget));
  }
  std::vector<KTree> out;
  out.reserve(merged.size());
  for (auto& [code, tree] : merged) out.push_back(std::move(tree));
  return out;
}

}  // namespace detail

/// Streams every class of each order k..n_max to `visit`, level by level in
/// canonical-code order. Level m+1 is obtained by attaching a vertex to every
/// k-clique of every level-m representative and deduplicating by code.
inline void for_each_ktree(int k, int n_max, const GenerationOptions& options,
                           const std::function<void(const KTree&)>& visit) {
  detail::require(k >= 1, "k must be positive");
  std::vector<KTree> level{KTree(k, {})};
  for (int n = k; n <= n_max; ++n) {
    if (n > k) level = detail::next_level(level, k, options);
    for (const KTree& tree : level) visit(tree);
  }
}

/// One representative per isomorphism class of k-trees on n vertices, sorted
/// by canonical code.
inline std::vector<KTree> generate_all_ktrees(int k, int n, const GenerationOptions& options = {}) {
  detail::require(k >= 1, "k must be positive");
  detail::require(n >= k, "generation needs n >= k");
  std::vector<KTree> level{KTree(k, {})};
  for (int m = k; m < n; ++m) level = detail::next_level(level, k, options);
  return level;
}

}  // namespace ktree::families
