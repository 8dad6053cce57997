#pragma once

#include "ktree/cliques.hpp"
#include "ktree/error.hpp"
#include "ktree/graph.hpp"
#include "ktree/ktree.hpp"
#include "ktree/number.hpp"

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ktree {

struct GlobalScope {
  bool operator==(const GlobalScope&) const = default;
};
struct CliqueScope {
  KClique clique;
  bool operator==(const CliqueScope&) const = default;
};
struct VertexScope {
  Vertex vertex = 0;
  bool operator==(const VertexScope&) const = default;
};

// Which sub-k-trees a statistic ranges over: all, those containing a k-clique,
// or those containing a vertex.
using Scope = std::variant<GlobalScope, CliqueScope, VertexScope>;

inline std::string to_string(const Scope& scope) {
  if (std::holds_alternative<GlobalScope>(scope)) return "global";
  if (auto* c = std::get_if<CliqueScope>(&scope)) {
    std::string out = "clique=";
    for (std::size_t i = 0; i < c->clique.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(c->clique[i]);
    }
    return out;
  }
  return "vertex=" + std::to_string(std::get<VertexScope>(scope).vertex);
}

/// Exact sub-k-tree statistics for one scope.
///
/// In global scope the avoiding fields are zero and reduced_mean is empty. In
/// clique scope reduced_mean is mean - k; in vertex scope it is mean - 1.
struct SubtreeStats {
  Natural count_containing;
  Natural order_sum_containing;
  Natural count_avoiding;
  Natural order_sum_avoiding;
  Rational mean;
  std::optional<Rational> reduced_mean;

  bool operator==(const SubtreeStats&) const = default;
};

namespace oracle {

inline constexpr int kDefaultBudget = 22;

/// Enumeration budget: n - k may not exceed this. KTREE_BUDGET overrides the default.
inline int default_budget() {
  if (const char* env = std::getenv("KTREE_BUDGET")) {
    try {
      int value = std::stoi(env);
      if (value > 0) return value;
    } catch (const std::exception&) {
    }
  }
  return kDefaultBudget;
}

inline void check_budget(const KTree& tree, int budget) {
  if (tree.order() - tree.k() > budget) {
    throw BudgetExceeded("brute-force enumeration needs n - k <= " + std::to_string(budget) +
                         ", got n - k = " + std::to_string(tree.order() - tree.k()));
  }
  if (tree.order() > 62) throw BudgetExceeded("brute-force enumeration needs n <= 62");
}

/// All sub-k-trees of `tree` as vertex bitmasks, in increasing mask order.
/// A sub-k-tree is always induced, so it is identified with its vertex set.
inline std::vector<std::uint64_t> enumerate_sub_ktrees(const KTree& tree,
                                                       int budget = default_budget()) {
  check_budget(tree, budget);
  const auto adjacency = tree.graph().masks();
  const int n = tree.order();
  const int k = tree.k();
  std::vector<std::uint64_t> out;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t subset = 1; subset < limit; ++subset) {
    if (std::popcount(subset) < k) continue;
    if (is_ktree_induced(adjacency, subset, k)) out.push_back(subset);
  }
  return out;
}

inline std::uint64_t mask_of(const KClique& c) {
  std::uint64_t mask = 0;
  for (Vertex v : c) mask |= std::uint64_t{1} << v;
  return mask;
}

inline void validate_scope(const KTree& tree, const Scope& scope) {
  if (auto* c = std::get_if<CliqueScope>(&scope)) {
    if (static_cast<int>(c->clique.size()) != tree.k()) {
      throw InvalidArgument("scope clique " + c->clique.str() + " does not have k = " +
                            std::to_string(tree.k()) + " vertices");
    }
    for (Vertex v : c->clique) {
      if (v < 0 || v >= tree.order()) {
        throw InvalidArgument("scope clique names vertex " + std::to_string(v) +
                              " outside the instance");
      }
    }
    if (!tree.is_clique(c->clique)) {
      throw InvalidArgument("scope " + c->clique.str() + " is not a clique of the instance");
    }
  } else if (auto* v = std::get_if<VertexScope>(&scope)) {
    if (v->vertex < 0 || v->vertex >= tree.order()) {
      throw InvalidArgument("scope vertex " + std::to_string(v->vertex) + " is outside 0.." +
                            std::to_string(tree.order() - 1));
    }
  }
}

inline SubtreeStats finish(Natural n_in, Natural r_in, Natural n_out, Natural r_out, int fixed) {
  SubtreeStats out;
  out.mean = Rational(r_in, n_in);
  if (fixed > 0) out.reduced_mean = out.mean - fixed;
  out.count_containing = std::move(n_in);
  out.order_sum_containing = std::move(r_in);
  out.count_avoiding = std::move(n_out);
  out.order_sum_avoiding = std::move(r_out);
  return out;
}

/// Statistics over an already enumerated list of sub-k-trees.
inline SubtreeStats stats_from(const KTree& tree, const std::vector<std::uint64_t>& subtrees,
                               const Scope& scope) {
  validate_scope(tree, scope);
  std::uint64_t required = 0;
  int fixed = 0;
  if (auto* c = std::get_if<CliqueScope>(&scope)) {
    required = mask_of(c->clique);
    fixed = tree.k();
  } else if (auto* v = std::get_if<VertexScope>(&scope)) {
    required = std::uint64_t{1} << v->vertex;
    fixed = 1;
  }
  // Machine-word accumulation: at most 2^62 subsets of at most 62 vertices each
  // would overflow, but enumeration is already bounded far below that.
  unsigned long long n_in = 0, r_in = 0, n_out = 0, r_out = 0;
  for (std::uint64_t s : subtrees) {
    const auto size = static_cast<unsigned long long>(std::popcount(s));
    if ((s & required) == required) {
      ++n_in;
      r_in += size;
    } else {
      ++n_out;
      r_out += size;
    }
  }
  return finish(Natural(n_in), Natural(r_in), Natural(n_out), Natural(r_out), fixed);
}

/// Brute-force statistics. In clique scope only supersets of the clique are
/// tested for the containing counts; the avoiding counts need the full sweep.
inline SubtreeStats stats(const KTree& tree, const Scope& scope, int budget = default_budget()) {
  validate_scope(tree, scope);
  check_budget(tree, budget);
  if (std::holds_alternative<GlobalScope>(scope)) {
    return stats_from(tree, enumerate_sub_ktrees(tree, budget), scope);
  }
  const auto adjacency = tree.graph().masks();
  const int n = tree.order();
  const int k = tree.k();
  std::uint64_t required = 0;
  int fixed = 1;
  if (auto* c = std::get_if<CliqueScope>(&scope)) {
    required = mask_of(c->clique);
    fixed = k;
  } else {
    required = std::uint64_t{1} << std::get<VertexScope>(scope).vertex;
  }
  const std::uint64_t full = (n == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  const std::uint64_t free_bits = full & ~required;

  unsigned long long n_in = 0, r_in = 0, n_out = 0, r_out = 0;
  // Supersets of `required`: walk the submasks of the free bits.
  std::uint64_t extra = 0;
  do {
    const std::uint64_t s = extra | required;
    if (is_ktree_induced(adjacency, s, k)) {
      ++n_in;
      r_in += static_cast<unsigned long long>(std::popcount(s));
    }
    extra = (extra - free_bits) & free_bits;
  } while (extra != 0);
  // Everything that misses at least one required vertex.
  for (std::uint64_t s = 1; s <= full; ++s) {
    if ((s & required) == required) continue;
    if (std::popcount(s) >= k && is_ktree_induced(adjacency, s, k)) {
      ++n_out;
      r_out += static_cast<unsigned long long>(std::popcount(s));
    }
    if (s == full) break;
  }
  return finish(Natural(n_in), Natural(r_in), Natural(n_out), Natural(r_out), fixed);
}

}  // namespace oracle
}  // namespace ktree
