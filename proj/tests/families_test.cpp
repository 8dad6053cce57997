#include "ktree/canonical.hpp"
#include "ktree/cliques.hpp"
#include "ktree/families.hpp"
#include "ktree/ktc.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

namespace {

using namespace ktree;
using namespace ktree::families;

// AHU encoding of a free tree: canonical string of the tree rooted at its
// center(s), taking the smaller string when there are two centers.
std::string ahu(const std::vector<std::vector<int>>& adj, int root, int parent) {
  std::vector<std::string> parts;
  for (int c : adj[root]) {
    if (c != parent) parts.push_back(ahu(adj, c, root));
  }
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (auto& p : parts) out += p;
  return out + ")";
}

std::string free_tree_code(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  if (n == 1) return "()";
  std::vector<int> deg(static_cast<std::size_t>(n));
  std::vector<int> layer;
  for (int v = 0; v < n; ++v) {
    deg[v] = static_cast<int>(adj[v].size());
    if (deg[v] <= 1) layer.push_back(v);
  }
  int remaining = n;
  while (remaining > 2) {
    remaining -= static_cast<int>(layer.size());
    std::vector<int> next;
    for (int v : layer) {
      for (int u : adj[v]) {
        if (--deg[u] == 1) next.push_back(u);
      }
    }
    layer = next;
  }
  std::string best;
  for (int c : layer) {
    std::string code = ahu(adj, c, -1);
    if (best.empty() || code < best) best = code;
  }
  return best;
}

// Unlabeled tree count on n vertices via every Prüfer sequence.
std::size_t count_free_trees(int n) {
  if (n <= 2) return 1;
  std::set<std::string> codes;
  std::vector<int> seq(static_cast<std::size_t>(n - 2), 0);
  while (true) {
    std::vector<int> degree(static_cast<std::size_t>(n), 1);
    for (int x : seq) ++degree[x];
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int x : seq) {
      int leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      adj[leaf].push_back(x);
      adj[x].push_back(leaf);
      --degree[leaf];
      --degree[x];
    }
    std::vector<int> last;
    for (int v = 0; v < n; ++v) {
      if (degree[v] == 1) last.push_back(v);
    }
    adj[last[0]].push_back(last[1]);
    adj[last[1]].push_back(last[0]);
    codes.insert(free_tree_code(adj));
    int i = 0;
    while (i < n - 2 && ++seq[i] == n) seq[i++] = 0;
    if (i == n - 2) break;
  }
  return codes.size();
}

// Classes of labeled k-trees on n vertices, deduplicated by the smallest
// adjacency bit string over all n! relabelings.
std::size_t count_by_permutation(int k, int n) {
  std::vector<KTree> level{KTree(k, {})};
  for (int m = k; m < n; ++m) {
    std::vector<KTree> next;
    for (const KTree& t : level) {
      for (auto& [c, d] : k_cliques_with_degree(t)) {
        auto a = t.attachments();
        a.push_back(c);
        next.emplace_back(k, std::move(a));
      }
    }
    level = std::move(next);
  }
  std::set<std::vector<char>> classes;
  for (const KTree& t : level) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<char> best;
    do {
      std::vector<char> bits;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) bits.push_back(t.adjacent(perm[i], perm[j]));
      }
      if (best.empty() || bits < best) best = bits;
    } while (std::next_permutation(perm.begin(), perm.end()));
    classes.insert(best);
  }
  return classes.size();
}

TEST(Constructors, Star) {
  KTree s = make_k_star(1, 4);
  EXPECT_EQ(s.graph().degree(0), 3u);
  EXPECT_EQ(s.leaves().size(), 3u);
  KTree s2 = make_k_star(2, 5);
  for (const KClique& a : s2.attachments()) EXPECT_EQ(a, (KClique{0, 1}));
  EXPECT_EQ(s2.leaves().size(), 3u);
  EXPECT_THROW(make_k_star(3, 2), InvalidArgument);
}

TEST(Constructors, StarHasNoDegreeTwoCliquesBeyondKPlus2) {
  for (int k = 1; k <= 4; ++k) {
    for (int n = k + 3; n <= k + 8; ++n) {
      EXPECT_TRUE(is_series_reduced(CliqueComplex(make_k_star(k, n))));
    }
  }
  EXPECT_FALSE(is_series_reduced(CliqueComplex(make_k_star(2, 4))));
}

TEST(Constructors, Path) {
  KTree p = make_k_path(1, 5);
  EXPECT_EQ(p.edge_count(), 4u);
  EXPECT_EQ(p.leaves(), (std::vector<Vertex>{0, 4}));
  KTree p2 = make_k_path(2, 6);
  EXPECT_EQ(p2.leaves().size(), 2u);
  std::map<int, int> histogram;
  for (auto& [c, d] : k_cliques_with_degree(p2)) ++histogram[d];
  // 9 cliques: the inner edges {1,2}, {2,3}, {3,4} have degree 2.
  EXPECT_EQ(histogram, (std::map<int, int>{{1, 6}, {2, 3}}));
  for (int k = 1; k <= 4; ++k) {
    for (int n = k + 2; n <= k + 8; ++n) EXPECT_EQ(make_k_path(k, n).leaves().size(), 2u);
  }
}

TEST(Constructors, Broom) {
  EXPECT_EQ(canonical_code(make_k_broom(1, 1, 3)), canonical_code(make_k_star(1, 4)));
  EXPECT_EQ(make_k_broom(1, 4, 0), make_k_path(1, 4));
  KTree b = make_k_broom(2, 7, 5);
  EXPECT_EQ(b.order(), 12);
  EXPECT_EQ(b.leaves().size(), 6u);
  EXPECT_THROW(make_k_broom(3, 2, 1), InvalidArgument);
}

TEST(Constructors, Caterpillar) {
  KTree c = make_k_caterpillar(2, 4);
  EXPECT_EQ(c.order(), 9);
  EXPECT_EQ(c.leaves().size(), 5u);
  KTree c1 = make_k_caterpillar(1, 3);
  EXPECT_EQ(c1.order(), 8);
  EXPECT_EQ(c1.leaves().size(), 5u);
  // Stem vertices 0,1,2 carry 2, 1, 2 leaves.
  EXPECT_EQ(c1.degree(0), 3u);
  EXPECT_EQ(c1.degree(1), 3u);
  EXPECT_EQ(c1.degree(2), 3u);
  for (int k = 1; k <= 3; ++k) {
    for (int s = k + 1; s <= k + 6; ++s) {
      KTree t = make_k_caterpillar(k, s);
      EXPECT_EQ(t.order(), 2 * s + 3 - k);
      EXPECT_EQ(static_cast<int>(t.leaves().size()), s - k + 3);
      EXPECT_TRUE(recognize_ktree(t.graph(), k).is_ktree);
    }
  }
  EXPECT_THROW(make_k_caterpillar(2, 2), InvalidArgument);
}

TEST(Constructors, FamilySpecDispatch) {
  FamilySpec spec;
  spec.family = parse_family("broom");
  spec.k = 2;
  spec.handle = 7;
  spec.bristles = 5;
  EXPECT_EQ(make(spec), make_k_broom(2, 7, 5));
  EXPECT_THROW(parse_family("spider"), InvalidArgument);
  EXPECT_EQ(to_string(Family::Caterpillar), "caterpillar");
}

TEST(Predicates, StarAndBroom) {
  for (int k = 1; k <= 3; ++k) {
    for (int n = k; n <= k + 6; ++n) {
      EXPECT_TRUE(is_k_star(make_k_star(k, n)));
      EXPECT_TRUE(is_k_broom(make_k_star(k, n)));
      EXPECT_TRUE(is_k_broom(make_k_path(k, n)));
      for (int m = 0; m <= 3; ++m) EXPECT_TRUE(is_k_broom(make_k_broom(k, n, m)));
    }
  }
  EXPECT_FALSE(is_k_star(make_k_path(2, 5)));
  EXPECT_FALSE(is_k_broom(make_k_caterpillar(1, 3)));
  EXPECT_FALSE(is_k_broom(make_k_caterpillar(2, 5)));
  // Spider with three legs of length 2: not a broom.
  EXPECT_FALSE(is_k_broom(parse_ktc("ktree 1 7\n0\n0\n0\n1\n2\n3")));
}

TEST(Generator, TreeCountsMatchPruferEnumeration) {
  const std::vector<std::size_t> known{1, 1, 1, 2, 3, 6, 11, 23, 47, 106};
  for (int n = 1; n <= 10; ++n) {
    const std::size_t got = generate_all_ktrees(1, n).size();
    EXPECT_EQ(got, known[n - 1]) << "n=" << n;
    if (n <= 8) EXPECT_EQ(got, count_free_trees(n)) << "n=" << n;
  }
}

TEST(Generator, SmallCountsMatchPermutationDedupe) {
  EXPECT_EQ(generate_all_ktrees(2, 5).size(), 2u);
  EXPECT_EQ(generate_all_ktrees(3, 4).size(), 1u);
  for (int n = 2; n <= 7; ++n) EXPECT_EQ(generate_all_ktrees(2, n).size(), count_by_permutation(2, n));
  for (int n = 3; n <= 7; ++n) EXPECT_EQ(generate_all_ktrees(3, n).size(), count_by_permutation(3, n));
}

TEST(Generator, DistinctCodesAndConstructorsCovered) {
  for (int k = 1; k <= 3; ++k) {
    for (int n = k; n <= k + 5; ++n) {
      std::set<std::string> codes;
      for (const KTree& t : generate_all_ktrees(k, n)) {
        EXPECT_TRUE(codes.insert(canonical_code(t)).second);
        EXPECT_EQ(t.order(), n);
      }
      EXPECT_TRUE(codes.count(canonical_code(make_k_star(k, n))));
      EXPECT_TRUE(codes.count(canonical_code(make_k_path(k, n))));
    }
    const KTree cat = make_k_caterpillar(k, k + 1);
    std::set<std::string> codes;
    for (const KTree& t : generate_all_ktrees(k, cat.order())) codes.insert(canonical_code(t));
    EXPECT_TRUE(codes.count(canonical_code(cat)));
  }
}

TEST(Generator, WorkersDoNotChangeOutput) {
  GenerationOptions serial;
  GenerationOptions parallel;
  parallel.workers = 4;
  EXPECT_EQ(generate_all_ktrees(2, 8, serial), generate_all_ktrees(2, 8, parallel));
}

TEST(Generator, BudgetAndStreaming) {
  GenerationOptions tight;
  tight.class_budget = 5;
  EXPECT_THROW(generate_all_ktrees(1, 8, tight), BudgetExceeded);
  std::map<int, int> per_order;
  for_each_ktree(1, 7, {}, [&](const KTree& t) { ++per_order[t.order()]; });
  EXPECT_EQ(per_order, (std::map<int, int>{{1, 1}, {2, 1}, {3, 1}, {4, 2}, {5, 3}, {6, 6}, {7, 11}}));
}

}  // namespace
