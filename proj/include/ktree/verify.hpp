#pragma once

#include "ktree/canonical.hpp"
#include "ktree/cliques.hpp"
#include "ktree/closed_forms.hpp"
#include "ktree/error.hpp"
#include "ktree/exact_log.hpp"
#include "ktree/families.hpp"
#include "ktree/ktc.hpp"
#include "ktree/oracle.hpp"
#include "ktree/parallel.hpp"
#include "ktree/recurse.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace ktree::verify {

enum class Status { Pass, Fail, Skip };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skip: return "SKIP";
  }
  return "?";
}

using ktree::to_string;

/// One verdict. `instance` is the hex canonical code ("grid" for checks that
/// do not run on an instance); `ktc` is filled for FAIL records so the
/// witness can be replayed.
struct CheckRecord {
  std::string instance;
  std::string ktc;
  std::string check;
  Status status = Status::Pass;
  std::optional<Rational> margin;
  std::string witness;

  bool operator==(const CheckRecord&) const = default;
};

struct Counters {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t skip = 0;

  void count(Status s) {
    if (s == Status::Pass) ++pass;
    if (s == Status::Fail) ++fail;
    if (s == Status::Skip) ++skip;
  }
  Counters& operator+=(const Counters& o) {
    pass += o.pass;
    fail += o.fail;
    skip += o.skip;
    return *this;
  }
  bool operator==(const Counters&) const = default;
};

/// Records plus per-check counters. Records are kept sorted, so merging
/// reports in any order gives the same result.
class VerificationReport {
 public:
  void add(CheckRecord record) {
    counters_[record.check].count(record.status);
    auto pos = std::upper_bound(records_.begin(), records_.end(), record, less);
    records_.insert(pos, std::move(record));
  }

  void add_instance() { ++instances_; }

  void merge(VerificationReport other) {
    for (auto& [check, c] : other.counters_) counters_[check] += c;
    instances_ += other.instances_;
    std::vector<CheckRecord> merged;
    merged.reserve(records_.size() + other.records_.size());
    std::merge(std::make_move_iterator(records_.begin()), std::make_move_iterator(records_.end()),
               std::make_move_iterator(other.records_.begin()),
               std::make_move_iterator(other.records_.end()), std::back_inserter(merged), less);
    records_ = std::move(merged);
  }

  const std::vector<CheckRecord>& records() const { return records_; }
  const std::map<std::string, Counters>& counters() const { return counters_; }
  std::size_t instances() const { return instances_; }

  Counters totals() const {
    Counters out;
    for (auto& [check, c] : counters_) out += c;
    return out;
  }

  bool ok() const { return totals().fail == 0; }

  bool operator==(const VerificationReport&) const = default;

 private:
  static bool less(const CheckRecord& a, const CheckRecord& b) {
    auto key = [](const CheckRecord& r) {
      return std::tie(r.check, r.instance, r.status, r.witness, r.ktc);
    };
    if (key(a) != key(b)) return key(a) < key(b);
    return a.margin < b.margin;
  }

  std::vector<CheckRecord> records_;
  std::map<std::string, Counters> counters_;
  std::size_t instances_ = 0;
};

/// Everything the checks share about one instance, computed once.
class Instance {
 public:
  explicit Instance(KTree tree, int oracle_budget = oracle::default_budget())
      : tree_(std::move(tree)),
        code_(hex(canonical_code(tree_))),
        complex_(tree_),
        local_(recurse::all_local_stats(complex_)),
        oracle_budget_(oracle_budget) {
    // Any clique's containing + avoiding counts give the global counts.
    global_ = oracle::finish(local_[0].count_containing + local_[0].count_avoiding,
                             local_[0].order_sum_containing + local_[0].order_sum_avoiding,
                             Natural(0), Natural(0), 0);
  }

  const KTree& tree() const { return tree_; }
  int k() const { return tree_.k(); }
  int n() const { return tree_.order(); }
  const std::string& code() const { return code_; }
  const CliqueComplex& complex() const { return complex_; }
  std::size_t clique_count() const { return complex_.clique_count(); }
  const KClique& clique(std::size_t id) const { return complex_.clique(static_cast<int>(id)); }
  int degree(std::size_t id) const { return complex_.degree(static_cast<int>(id)); }
  const SubtreeStats& local(std::size_t id) const { return local_[id]; }
  const SubtreeStats& global() const { return global_; }
  int oracle_budget() const { return oracle_budget_; }

  bool series_reduced() const { return is_series_reduced(complex_); }

  bool oracle_feasible() const { return n() - k() <= oracle_budget_ && n() <= 62; }

  /// Brute-force sub-k-tree list; empty optional when over budget.
  const std::vector<std::uint64_t>* subtrees() const {
    if (!oracle_feasible()) return nullptr;
    if (!subtrees_) {
      subtrees_ = std::make_shared<std::vector<std::uint64_t>>(
          oracle::enumerate_sub_ktrees(tree_, oracle_budget_));
    }
    return subtrees_.get();
  }

  /// mu(T;v) for every vertex, by brute force; empty when over budget.
  std::optional<std::vector<Rational>> vertex_means() const {
    const auto* list = subtrees();
    if (!list) return std::nullopt;
    std::vector<unsigned long long> count(static_cast<std::size_t>(n()), 0), sum(count);
    for (std::uint64_t s : *list) {
      const auto size = static_cast<unsigned long long>(std::popcount(s));
      for (int v = 0; v < n(); ++v) {
        if (s >> v & 1) {
          ++count[v];
          sum[v] += size;
        }
      }
    }
    std::vector<Rational> out;
    for (int v = 0; v < n(); ++v) out.emplace_back(Natural(sum[v]), Natural(count[v]));
    return out;
  }

  CheckRecord record(std::string check, Status status, std::optional<Rational> margin = {},
                     std::string witness = {}) const {
    CheckRecord r;
    r.instance = code_;
    r.check = std::move(check);
    r.status = status;
    r.margin = std::move(margin);
    r.witness = std::move(witness);
    if (status == Status::Fail) r.ktc = serialize_ktc(tree_);
    return r;
  }

 private:
  KTree tree_;
  std::string code_;
  CliqueComplex complex_;
  std::vector<SubtreeStats> local_;
  SubtreeStats global_;
  int oracle_budget_;
  mutable std::shared_ptr<std::vector<std::uint64_t>> subtrees_;
};

using Records = std::vector<CheckRecord>;

namespace detail {

inline Status verdict(bool ok) { return ok ? Status::Pass : Status::Fail; }

inline std::string cliques_str(const std::vector<KClique>& cs) {
  std::string out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) out += ";";
    out += cs[i].str();
  }
  return out;
}

inline void keep_min(std::optional<Rational>& slot, const Rational& value) {
  if (!slot || value < *slot) slot = value;
}

// Components of T - removed, as vertex counts.
inline std::vector<int> component_sizes(const KTree& t, const std::vector<Vertex>& removed) {
  const int n = t.order();
  std::vector<char> gone(static_cast<std::size_t>(n), 0);
  for (Vertex v : removed) gone[v] = 1;
  std::vector<int> sizes;
  std::vector<char> seen(gone);
  for (Vertex s = 0; s < n; ++s) {
    if (seen[s]) continue;
    int size = 0;
    std::vector<Vertex> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      ++size;
      for (Vertex u : t.graph().neighbors(v)) {
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
    sizes.push_back(size);
  }
  return sizes;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Theorem: the maximum local mean sits at a degree-1 clique; vertex vs clique.

/// max_local.degree_one: for k >= 2 every clique attaining max mu(T;C) has
/// degree 1, except at n = k + 2 where every clique has mu = k + 1.
/// max_local.vertex_below_clique: mu(T;v) < mu(T;C) for every v in C, when
/// k >= 2 and n >= k + 1 (for n = k both sides equal k).
inline Records check_max_local(const Instance& in) {
  Records out;
  const int k = in.k();
  const int n = in.n();
  Rational best = in.local(0).mean;
  for (std::size_t id = 1; id < in.clique_count(); ++id) best = std::max(best, in.local(id).mean);
  std::vector<KClique> argmax;
  std::optional<Rational> best_other;  // best mean among cliques of degree != 1
  for (std::size_t id = 0; id < in.clique_count(); ++id) {
    if (in.local(id).mean == best) argmax.push_back(in.clique(id));
    if (in.degree(id) != 1 && (!best_other || in.local(id).mean > *best_other)) {
      best_other = in.local(id).mean;
    }
  }
  std::string witness = "argmax=" + detail::cliques_str(argmax) + " mu=" + to_string(best);
  if (n == k + 2) {
    bool all = true;
    for (std::size_t id = 0; id < in.clique_count(); ++id) all = all && in.local(id).mean == k + 1;
    out.push_back(in.record("max_local.degree_one", detail::verdict(all), Rational(0), witness));
  } else if (k < 2) {
    out.push_back(in.record("max_local.degree_one", Status::Skip, {}, witness + " (k=1)"));
  } else {
    bool ok = true;
    for (std::size_t id = 0; id < in.clique_count(); ++id) {
      if (in.local(id).mean == best && in.degree(id) != 1 && in.degree(id) != 0) ok = false;
    }
    std::optional<Rational> margin;
    if (best_other && n > k) margin = best - *best_other;
    out.push_back(in.record("max_local.degree_one", detail::verdict(ok), margin, witness));
  }

  if (k < 2 || n < k + 1) {
    out.push_back(in.record("max_local.vertex_below_clique", Status::Skip, {},
                            k < 2 ? "k=1: C = {v}" : "n=k"));
    return out;
  }
  auto vertex = in.vertex_means();
  if (!vertex) {
    out.push_back(in.record("max_local.vertex_below_clique", Status::Skip, {}, "oracle budget"));
    return out;
  }
  std::optional<Rational> margin;
  std::string worst;
  for (std::size_t id = 0; id < in.clique_count(); ++id) {
    for (Vertex v : in.clique(id)) {
      Rational gap = in.local(id).mean - (*vertex)[v];
      if (!margin || gap < *margin) {
        margin = gap;
        worst = "C=" + in.clique(id).str() + " v=" + std::to_string(v);
      }
    }
  }
  out.push_back(in.record("max_local.vertex_below_clique", detail::verdict(*margin > 0), margin, worst));
  return out;
}

// ---------------------------------------------------------------------------
// Theorem: local mean below twice the global mean.

inline Records check_double_bound(const Instance& in) {
  std::optional<Rational> margin;
  std::string worst;
  const Rational twice = 2 * in.global().mean;
  for (std::size_t id = 0; id < in.clique_count(); ++id) {
    Rational gap = twice - in.local(id).mean;
    if (!margin || gap < *margin) {
      margin = gap;
      worst = "C=" + in.clique(id).str() + " ratio=" + to_string(Rational(in.local(id).mean / in.global().mean));
    }
  }
  return {in.record("double_bound", detail::verdict(*margin > 0), margin, worst)};
}

// ---------------------------------------------------------------------------
// Theorem: the band for k-trees without degree-2 cliques.

/// Applies to instances with no k-clique of degree 2 and n >= k + 2 (K_k and
/// K_{k+1} sit above the upper bound); other instances get SKIP records.
inline Records check_series_reduced(const Instance& in) {
  const int k = in.k();
  const int n = in.n();
  const char* ids[] = {"series_reduced.upper", "series_reduced.lower", "series_reduced.leaves",
                       "series_reduced.char_tree", "series_reduced.near_global"};
  Records out;
  if (!in.series_reduced() || n < k + 2) {
    const std::string why = n < k + 2 ? "n < k+2" : "has a degree-2 clique";
    for (const char* id : ids) out.push_back(in.record(id, Status::Skip, {}, why));
    return out;
  }
  const Rational mu = in.global().mean;

  const Rational upper = Rational(3 * n + k - 3, 4);
  out.push_back(in.record(ids[0], detail::verdict(mu < upper), upper - mu, "mu=" + to_string(mu)));

  // (n+k)/2 - 1/10 - n^3 / 2^{(n-k)/4} < mu  <=>  (n+k)/2 - 1/10 - mu < n^3 / 2^{(n-k)/4}.
  const Rational shortfall = Rational(n + k, 2) - Rational(1, 10) - mu;
  const bool lower_ok = compare_with_decay(shortfall, n, k) < 0;
  out.push_back(in.record(ids[1], detail::verdict(lower_ok), -shortfall,
                          "mu=" + to_string(mu) + " (margin excludes the n^3/2^((n-k)/4) term)"));

  const int leaves = static_cast<int>(in.tree().leaves().size());
  const Rational leaf_gap = Rational(leaves) - Rational(n - k + 3, 2);
  out.push_back(in.record(ids[2], detail::verdict(leaf_gap >= 0), leaf_gap,
                          "leaves=" + std::to_string(leaves)));

  std::string bad;
  for (std::size_t id = 0; id < in.clique_count() && bad.empty(); ++id) {
    if (!recurse::characteristic_tree(in.tree(), in.clique(id)).is_series_reduced()) {
      bad = "C=" + in.clique(id).str();
    }
  }
  out.push_back(in.record(ids[3], detail::verdict(bad.empty()), {}, bad));

  Rational closest = in.local(0).mean - mu;
  std::size_t where = 0;
  for (std::size_t id = 1; id < in.clique_count(); ++id) {
    if (in.local(id).mean - mu < closest) {
      closest = in.local(id).mean - mu;
      where = id;
    }
  }
  const bool near = compare_with_decay(closest, n, k) <= 0;
  out.push_back(in.record(ids[4], detail::verdict(near), {},
                          "C=" + in.clique(where).str() + " gap=" + to_string(closest)));
  return out;
}

// ---------------------------------------------------------------------------
// Structural lemmas.

inline Records check_structural(const Instance& in) {
  const int k = in.k();
  const int n = in.n();
  const KTree& t = in.tree();
  Records out;

  // Centroid (k+1)-clique.
  if (n >= k + 1) {
    const int limit = (n - k - 1 + 1) / 2;
    int best = n + 1;
    KClique best_block;
    for (std::size_t b = 0; b < t.attachments().size(); ++b) {
      KClique block = t.block(b);
      auto sizes = detail::component_sizes(t, block.vertices());
      int largest = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
      if (largest < best) {
        best = largest;
        best_block = block;
      }
    }
    out.push_back(in.record("structural.centroid", detail::verdict(best <= limit),
                            Rational(limit - best), "B=" + best_block.str()));
  } else {
    out.push_back(in.record("structural.centroid", Status::Skip, {}, "n=k"));
  }

  const bool path_type = is_path_type(t);
  std::optional<Rational> m_sum, m_upper, m_avoid, mono, simp;
  std::string w_sum, w_upper, w_lower, w_avoid, wmono, wsimp;
  bool ok_sum = true, ok_upper = true, ok_lower = true, ok_avoid = true, okmono = true, oksimp = true;
  for (std::size_t id = 0; id < in.clique_count(); ++id) {
    const KClique& c = in.clique(id);
    const SubtreeStats& s = in.local(id);
    const Natural& count = s.count_containing;
    const bool simplicial = is_simplicial(t, c);
    // T = K_k is an equality case of both bounds as well: N = 1, R = k.
    const bool equality_class = n == k || (path_type && simplicial);

    // R(T;C) <= (N^2 + (2k-1) N) / 2.
    const Rational bound_sum = Rational(count * count + (2 * k - 1) * count, 2);
    const Rational gap_sum = bound_sum - Rational(s.order_sum_containing);
    detail::keep_min(m_sum, gap_sum);
    if (gap_sum < 0 || (gap_sum == 0) != equality_class) {
      ok_sum = false;
      w_sum = "C=" + c.str() + " gap=" + to_string(gap_sum);
    }

    // mu(T;C) <= (N + 2k - 1) / 2.
    const Rational gap_upper = Rational(count + 2 * k - 1, 2) - s.mean;
    detail::keep_min(m_upper, gap_upper);
    if (gap_upper < 0 || (gap_upper == 0) != equality_class) {
      ok_upper = false;
      w_upper = "C=" + c.str() + " gap=" + to_string(gap_upper);
    }

    // k + log2(N)/2 <= mu(T;C), equality iff T is a k-star on base C.
    const int sign = compare_log2(Rational(count), 2 * (s.mean - k));
    if (sign > 0 || (sign == 0) != families::is_star_on(t, c)) {
      ok_lower = false;
      w_lower = "C=" + c.str() + " mu=" + to_string(s.mean) + " N=" + to_string(count);
    }

    // R(T;C) > Nbar(T;C).
    const Rational gap_avoid = Rational(s.order_sum_containing) - Rational(s.count_avoiding);
    detail::keep_min(m_avoid, gap_avoid);
    if (gap_avoid <= 0) {
      ok_avoid = false;
      w_avoid = "C=" + c.str();
    }

    // mu(T;C) >= mu(T), equality iff T = K_k.
    const Rational gap_mono = s.mean - in.global().mean;
    detail::keep_min(mono, gap_mono);
    if (gap_mono < 0 || (gap_mono == 0) != (n == k)) {
      okmono = false;
      wmono = "C=" + c.str();
    }

    // Without degree-2 cliques, T - C keeps at least (n-k)/2 k-leaves.
    if (in.series_reduced()) {
      int outside = 0;
      for (Vertex v : t.leaves()) outside += c.contains(v) ? 0 : 1;
      const Rational gap = Rational(outside) - Rational(n - k, 2);
      detail::keep_min(simp, gap);
      if (gap < 0) {
        oksimp = false;
        wsimp = "C=" + c.str();
      }
    }
  }
  out.push_back(in.record("structural.order_sum_bound", detail::verdict(ok_sum), m_sum, w_sum));
  out.push_back(in.record("structural.mean_upper", detail::verdict(ok_upper), m_upper, w_upper));
  out.push_back(in.record("structural.mean_lower", detail::verdict(ok_lower), {}, w_lower));
  out.push_back(in.record("structural.order_sum_vs_avoiding", detail::verdict(ok_avoid), m_avoid, w_avoid));
  if (in.series_reduced()) {
    out.push_back(in.record("structural.simplicial_outside", detail::verdict(oksimp), simp, wsimp));
  } else {
    out.push_back(in.record("structural.simplicial_outside", Status::Skip, {}, "has a degree-2 clique"));
  }
  out.push_back(in.record("structural.global_below_local", detail::verdict(okmono), mono, wmono));

  const Rational floor = recurse::path_type_global_minimum(k, n);
  const Rational gap = in.global().mean - floor;
  const bool ok = gap >= 0 && (gap == 0) == path_type;
  out.push_back(in.record("structural.path_minimum", detail::verdict(ok), gap,
                          path_type ? "path-type" : ""));
  return out;
}

// ---------------------------------------------------------------------------
// Recursion against the oracle and its internal identities.

inline Records check_recursion(const Instance& in) {
  const int k = in.k();
  const KTree& t = in.tree();
  Records out;

  if (const auto* list = in.subtrees()) {
    std::string bad;
    const auto global = oracle::stats_from(t, *list, GlobalScope{});
    if (global != in.global()) bad = "global";
    for (std::size_t id = 0; id < in.clique_count() && bad.empty(); ++id) {
      if (oracle::stats_from(t, *list, CliqueScope{in.clique(id)}) != in.local(id)) {
        bad = "C=" + in.clique(id).str();
      }
    }
    out.push_back(in.record("recursion.oracle", detail::verdict(bad.empty()), {}, bad));
  } else {
    out.push_back(in.record("recursion.oracle", Status::Skip, {}, "oracle budget"));
  }

  // Every clique's containing + avoiding counts give the same global counts.
  std::string differs;
  for (std::size_t id = 0; id < in.clique_count() && differs.empty(); ++id) {
    const SubtreeStats& s = in.local(id);
    if (s.count_containing + s.count_avoiding != in.global().count_containing ||
        s.order_sum_containing + s.order_sum_avoiding != in.global().order_sum_containing) {
      differs = "C=" + in.clique(id).str();
    }
  }
  out.push_back(in.record("recursion.choice", detail::verdict(differs.empty()), {}, differs));

  // N(T;C_{1,1}) = N_{1,1} + prod_j N_{1,j} prod_{i>=2} (1 + prod_j N_{i,j}),
  // with the N_{i,j} read off the table rooted at C.
  std::string branch_bad;
  for (std::size_t id = 0; id < in.clique_count() && branch_bad.empty(); ++id) {
    if (in.degree(id) == 0) continue;
    const recurse::Rooting rooting(in.complex(), static_cast<int>(id));
    const auto table = recurse::tabulate(in.complex(), rooting);
    std::vector<int> blocks = rooting.child_blocks(static_cast<int>(id));
    std::sort(blocks.begin(), blocks.end(),
              [&](int a, int b) { return rooting.apex(a) < rooting.apex(b); });
    std::vector<int> first = rooting.child_cliques(blocks[0]);
    std::sort(first.begin(), first.end(), [&](int a, int b) {
      return in.complex().clique(a) < in.complex().clique(b);
    });
    Natural product = 1;
    for (int y : first) product *= table.count[y];
    for (std::size_t i = 1; i < blocks.size(); ++i) {
      Natural inner = 1;
      for (int y : rooting.child_cliques(blocks[i])) inner *= table.count[y];
      product *= inner + 1;
    }
    if (in.local(static_cast<std::size_t>(first[0])).count_containing != table.count[first[0]] + product) {
      branch_bad = "C=" + in.clique(id).str();
    }
  }
  out.push_back(in.record("recursion.branch_identity", detail::verdict(branch_bad.empty()), {},
                          branch_bad));

  // mu(T;C) = mu(T'_C; root) + k - 1, with the 1-tree handled by this library.
  std::string transfer_bad;
  for (std::size_t id = 0; id < in.clique_count() && transfer_bad.empty(); ++id) {
    const KTree one = recurse::characteristic_tree(t, in.clique(id)).to_ktree();
    const Rational rhs = recurse::local_stats(one, KClique{0}).mean + (k - 1);
    if (rhs != in.local(id).mean) transfer_bad = "C=" + in.clique(id).str();
  }
  out.push_back(in.record("recursion.transfer", detail::verdict(transfer_bad.empty()), {},
                          transfer_bad));
  return out;
}

// ---------------------------------------------------------------------------
// Canonical code invariance under relabeling.

inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline Records check_canonical(const Instance& in, std::uint64_t seed, int trials = 3) {
  std::mt19937_64 rng(seed ^ fnv1a(in.code()));
  std::string bad;
  for (int i = 0; i < trials && bad.empty(); ++i) {
    const auto perm = random_permutation(in.n(), rng);
    const Graph shuffled = relabel(in.tree().graph(), perm);
    if (hex(canonical_code(shuffled)) != in.code()) {
      bad = "trial " + std::to_string(i);
      break;
    }
    const auto rebuilt = from_graph(shuffled, in.k());
    if (recurse::global_stats_fast(rebuilt.tree) != in.global()) bad = "stats changed, trial " + std::to_string(i);
  }
  return {in.record("canonical.relabel", detail::verdict(bad.empty()), {}, bad)};
}

// ---------------------------------------------------------------------------
// Auxiliary inequalities on finite grids.

struct AuxGrid {
  std::size_t vectors = 10'000;  // sum-bound samples
  int max_length = 8;
  int max_entry = 100;
  int max_denominator = 16;
  int k_min = 2;
  int k_max = 6;
  int yz_max = 50;
  std::uint64_t seed = 1;
};

/// Sum x_i <= prod x_i + (n-1) for x_i >= 1, with equality iff at most one
/// x_i differs from 1. Samples random rational vectors plus the equality
/// configurations and vectors close to them.
inline CheckRecord check_sum_bound(const AuxGrid& grid) {
  std::mt19937_64 rng(grid.seed);
  std::uniform_int_distribution<int> length(1, grid.max_length);
  std::uniform_int_distribution<int> den(1, grid.max_denominator);
  std::uniform_int_distribution<int> shape(0, 3);
  std::size_t equalities = 0;
  std::optional<Rational> margin;  // smallest gap over non-equality samples
  std::string bad;
  for (std::size_t s = 0; s < grid.vectors && bad.empty(); ++s) {
    const int n = length(rng);
    std::vector<Rational> x;
    const int kind = shape(rng);
    for (int i = 0; i < n; ++i) {
      const int q = den(rng);
      // Numerators in [q, max_entry q] keep x in [1, max_entry].
      std::uniform_int_distribution<int> num(q, grid.max_entry * q);
      Rational value(num(rng), q);
      if (kind == 1 && i > 0) value = 1;                       // (P, 1, ..., 1)
      if (kind == 2 && i > 0) value = i == 1 ? Rational(q + 1, q) : Rational(1);  // near equality
      x.push_back(value);
    }
    std::shuffle(x.begin(), x.end(), rng);
    Rational sum = 0, product = 1;
    int above_one = 0;
    for (const Rational& v : x) {
      sum += v;
      product *= v;
      above_one += v > 1 ? 1 : 0;
    }
    const Rational gap = product + (n - 1) - sum;
    const bool equality_config = above_one <= 1;
    if (gap < 0 || (gap == 0) != equality_config) {
      std::ostringstream w;
      w << "x=(";
      for (std::size_t i = 0; i < x.size(); ++i) w << (i ? "," : "") << to_string(x[i]);
      w << ")";
      bad = w.str();
    }
    if (gap == 0) {
      ++equalities;
    } else {
      detail::keep_min(margin, gap);
    }
  }
  CheckRecord r;
  r.instance = "grid";
  r.check = "aux.sum_bound";
  r.status = detail::verdict(bad.empty());
  r.margin = margin;
  r.witness = bad.empty() ? "samples=" + std::to_string(grid.vectors) +
                                " equalities=" + std::to_string(equalities)
                          : bad;
  return r;
}

/// For integers z >= y >= 1 and k >= 2:
///   (1 - y + y^{k-1} z)/(1 + y^k) (1 + (k/2) log2 y)
///     >= z/(1 + y^{k-1} z) (1 + ((k-1) y + z - k)/2),
/// with equality at y = 1.
inline CheckRecord check_ratio_bound(const AuxGrid& grid) {
  std::size_t cases = 0, equalities = 0;
  std::string bad;
  for (int k = grid.k_min; k <= grid.k_max && bad.empty(); ++k) {
    for (int y = 1; y <= grid.yz_max && bad.empty(); ++y) {
      const Natural yk1 = boost::multiprecision::pow(Natural(y), static_cast<unsigned>(k - 1));
      const Natural yk = yk1 * y;
      for (int z = y; z <= grid.yz_max; ++z) {
        ++cases;
        const Rational a(Natural(1) - y + yk1 * z, Natural(1) + yk);
        const Rational rhs = Rational(z) / Rational(Natural(1) + yk1 * z) *
                             (1 + Rational((k - 1) * y + z - k, 2));
        // a (1 + (k/2) log2 y) >= rhs  <=>  log2 y >= (rhs/a - 1) 2/k, since a > 0.
        const Rational target = (rhs / a - 1) * 2 / k;
        const int sign = compare_log2(Rational(y), target);
        if (sign < 0 || (sign == 0 && y != 1)) {
          bad = "k=" + std::to_string(k) + " y=" + std::to_string(y) + " z=" + std::to_string(z);
          break;
        }
        if (sign == 0) ++equalities;
      }
    }
  }
  CheckRecord r;
  r.instance = "grid";
  r.check = "aux.ratio_bound";
  r.status = detail::verdict(bad.empty());
  r.witness = bad.empty() ? "cases=" + std::to_string(cases) + " equalities=" + std::to_string(equalities)
                          : bad;
  return r;
}

inline Records check_aux_inequalities(const AuxGrid& grid = {}) {
  return {check_sum_bound(grid), check_ratio_bound(grid)};
}

// ---------------------------------------------------------------------------
// Extremal search.

enum class Objective { MinGlobal, MaxGlobal, MaxLocal };
enum class Filter { All, SeriesReduced, PathType };

inline Objective parse_objective(const std::string& s) {
  if (s == "min-global") return Objective::MinGlobal;
  if (s == "max-global") return Objective::MaxGlobal;
  if (s == "max-local") return Objective::MaxLocal;
  throw InvalidArgument("unknown objective '" + s + "' (min-global|max-global|max-local)");
}

inline Filter parse_filter(const std::string& s) {
  if (s == "all") return Filter::All;
  if (s == "series-reduced") return Filter::SeriesReduced;
  if (s == "path-type") return Filter::PathType;
  throw InvalidArgument("unknown filter '" + s + "' (all|series-reduced|path-type)");
}

struct ExtremalEntry {
  int rank = 0;  // 1-based; tied entries share a rank
  KTree tree;
  std::string code;               // hex canonical code
  Rational value;                 // objective value
  std::vector<KClique> witnesses; // argmax cliques for max-local
};

inline bool passes(const KTree& t, Filter f) {
  switch (f) {
    case Filter::All: return true;
    case Filter::SeriesReduced: return is_series_reduced(CliqueComplex(t));
    case Filter::PathType: return is_path_type(t);
  }
  return false;
}

/// All classes of k-trees on n vertices passing `filter`, ranked by
/// `objective` (best first). Entries with equal values share a rank and are
/// ordered by canonical code.
inline std::vector<ExtremalEntry> find_extremal(int k, int n, Objective objective, Filter filter,
                                                const families::GenerationOptions& options = {}) {
  std::vector<ExtremalEntry> entries;
  for (KTree& t : families::generate_all_ktrees(k, n, options)) {
    if (!passes(t, filter)) continue;
    ExtremalEntry e{0, t, hex(canonical_code(t)), Rational(0), {}};
    if (objective == Objective::MaxLocal) {
      CliqueComplex complex(t);
      auto local = recurse::all_local_stats(complex);
      e.value = local[0].mean;
      for (auto& s : local) e.value = std::max(e.value, s.mean);
      for (std::size_t id = 0; id < local.size(); ++id) {
        if (local[id].mean == e.value) e.witnesses.push_back(complex.clique(static_cast<int>(id)));
      }
    } else {
      e.value = recurse::global_stats_fast(t).mean;
    }
    entries.push_back(std::move(e));
  }
  const bool ascending = objective == Objective::MinGlobal;
  std::sort(entries.begin(), entries.end(), [&](const ExtremalEntry& a, const ExtremalEntry& b) {
    if (a.value != b.value) return ascending ? a.value < b.value : a.value > b.value;
    return a.code < b.code;
  });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].rank = (i > 0 && entries[i].value == entries[i - 1].value)
                          ? entries[i - 1].rank
                          : static_cast<int>(i) + 1;
  }
  return entries;
}

/// Entries within the best `top` ranks (ties included).
inline std::vector<ExtremalEntry> top_ranks(std::vector<ExtremalEntry> entries, int top) {
  entries.erase(std::remove_if(entries.begin(), entries.end(),
                               [&](const ExtremalEntry& e) { return e.rank > top; }),
                entries.end());
  return entries;
}

// ---------------------------------------------------------------------------
// Sweeps.

enum class Check { MaxLocal, DoubleBound, SeriesReduced, Structural, Recursion, Canonical, Aux };

inline const std::vector<std::pair<std::string, Check>>& check_names() {
  static const std::vector<std::pair<std::string, Check>> names{
      {"max_local", Check::MaxLocal},       {"double_bound", Check::DoubleBound},
      {"series_reduced", Check::SeriesReduced}, {"structural", Check::Structural},
      {"recursion", Check::Recursion},      {"canonical", Check::Canonical},
      {"aux", Check::Aux}};
  return names;
}

/// "all" or a comma list of check group names.
inline std::set<Check> parse_checks(const std::string& list) {
  std::set<Check> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") {
      for (auto& [name, c] : check_names()) out.insert(c);
      continue;
    }
    auto it = std::find_if(check_names().begin(), check_names().end(),
                           [&](const auto& p) { return p.first == item; });
    if (it == check_names().end()) throw InvalidArgument("unknown check '" + item + "'");
    out.insert(it->second);
  }
  if (out.empty()) throw InvalidArgument("no checks selected");
  return out;
}

inline VerificationReport verify_instance(const Instance& in, const std::set<Check>& checks,
                                          std::uint64_t seed = 1) {
  VerificationReport report;
  report.add_instance();
  auto add = [&](Records rs) {
    for (auto& r : rs) report.add(std::move(r));
  };
  if (checks.count(Check::MaxLocal)) add(check_max_local(in));
  if (checks.count(Check::DoubleBound)) add(check_double_bound(in));
  if (checks.count(Check::SeriesReduced)) add(check_series_reduced(in));
  if (checks.count(Check::Structural)) add(check_structural(in));
  if (checks.count(Check::Recursion)) add(check_recursion(in));
  if (checks.count(Check::Canonical)) add(check_canonical(in, seed));
  return report;
}

struct VerifyOptions {
  int k = 2;
  int n_min = -1;  // defaults to k
  int n_max = 8;
  std::set<Check> checks = parse_checks("all");
  unsigned workers = 1;
  bool fail_fast = false;
  std::uint64_t seed = 1;
  int oracle_budget = oracle::default_budget();
  families::GenerationOptions generation;
  AuxGrid aux;
};

/// Runs the selected checks on every class of k-trees with n_min <= n <= n_max,
/// level by level, instances of one level in parallel. With fail_fast the
/// sweep stops after the first level that produced a FAIL (workers already
/// running finish their instance).
inline VerificationReport run_verify(const VerifyOptions& options,
                                     const std::function<void(int, std::size_t)>& on_level = {}) {
  if (options.k < 1) throw InvalidArgument("k must be positive");
  const int n_min = options.n_min < 0 ? options.k : options.n_min;
  if (options.n_max < n_min) throw InvalidArgument("n-max must be at least " + std::to_string(n_min));
  VerificationReport report;
  if (options.checks.count(Check::Aux)) {
    for (auto& r : check_aux_inequalities(options.aux)) report.add(std::move(r));
    if (options.fail_fast && !report.ok()) return report;
  }
  std::vector<KTree> level{KTree(options.k, {})};
  for (int n = options.k; n <= options.n_max; ++n) {
    if (n > options.k) level = families::detail::next_level(level, options.k, options.generation);
    if (n < n_min) continue;
    if (on_level) on_level(n, level.size());
    VerificationReport part = parallel_map_reduce(
        level.size(), options.workers, VerificationReport{},
        [&](std::size_t i) {
          return verify_instance(Instance(level[i], options.oracle_budget), options.checks,
                                 options.seed);
        },
        [](VerificationReport& acc, VerificationReport r) { acc.merge(std::move(r)); },
        [&](const VerificationReport& r) { return options.fail_fast && !r.ok(); });
    report.merge(std::move(part));
    if (options.fail_fast && !report.ok()) break;
  }
  return report;
}

}  // namespace ktree::verify
