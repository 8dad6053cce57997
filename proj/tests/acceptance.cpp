// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is 0 iff all criteria pass.

#include "ktree/closed_forms.hpp"
#include "ktree/families.hpp"
#include "ktree/ktc.hpp"
#include "ktree/oracle.hpp"
#include "ktree/recurse.hpp"
#include "ktree/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace ktree;
using verify::Status;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// One verification sweep per k, shared by the criteria that read its records.
std::map<int, verify::VerificationReport> sweeps;

const verify::VerificationReport& sweep(int k) {
  auto it = sweeps.find(k);
  if (it != sweeps.end()) return it->second;
  verify::VerifyOptions options;
  options.k = k;
  options.n_max = k + 8;
  options.checks = verify::parse_checks("max_local,double_bound,series_reduced,structural,recursion");
  return sweeps.emplace(k, verify::run_verify(options)).first->second;
}

// Counts records whose id starts with `prefix` over the sweeps for `ks`.
struct Tally {
  std::size_t pass = 0, fail = 0, skip = 0;
  std::string first_failure;
};

Tally tally(const std::vector<int>& ks, const std::string& prefix) {
  Tally t;
  for (int k : ks) {
    for (const auto& r : sweep(k).records()) {
      if (r.check.rfind(prefix, 0) != 0) continue;
      if (r.status == Status::Pass) ++t.pass;
      if (r.status == Status::Skip) ++t.skip;
      if (r.status == Status::Fail) {
        if (!t.fail++) t.first_failure = r.check + " " + r.witness + "\n" + r.ktc;
      }
    }
  }
  return t;
}

std::string describe(const Tally& t) {
  std::ostringstream s;
  s << "pass=" << t.pass << " fail=" << t.fail << " skip=" << t.skip;
  if (t.fail) s << " first: " << t.first_failure;
  return s.str();
}

std::string fmt(double x, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

// 1. Oracle and recursion agree on (N, R, Nbar, Rbar) at every clique.
Outcome ac1() {
  Outcome o;
  std::size_t classes = 0, cliques = 0;
  for (int k = 1; k <= 3; ++k) {
    families::for_each_ktree(k, k + 8, {}, [&](const KTree& t) {
      ++classes;
      const auto subtrees = oracle::enumerate_sub_ktrees(t);
      CliqueComplex complex(t);
      for (int id = 0; id < static_cast<int>(complex.clique_count()); ++id) {
        ++cliques;
        const auto want = oracle::stats_from(t, subtrees, CliqueScope{complex.clique(id)});
        const auto got = recurse::local_stats(complex, id);
        if (want.count_containing != got.count_containing ||
            want.order_sum_containing != got.order_sum_containing ||
            want.count_avoiding != got.count_avoiding || want.order_sum_avoiding != got.order_sum_avoiding) {
          if (o.pass) o.detail = "mismatch at " + complex.clique(id).str() + " in\n" + serialize_ktc(t);
          o.pass = false;
        }
      }
    });
  }
  o.detail = std::to_string(classes) + " classes, " + std::to_string(cliques) + " cliques" +
             (o.pass ? "" : "; " + o.detail);
  return o;
}

// 2. The maximum local mean sits on a degree-1 clique; at n = k+2 every clique has mean k+1.
Outcome ac2() {
  Outcome o;
  const Tally t = tally({2, 3}, "max_local.degree_one");
  o.pass = t.fail == 0 && t.pass > 0;
  std::size_t small = 0;
  for (int k = 2; k <= 3; ++k) {
    for (const KTree& tree : families::generate_all_ktrees(k, k + 2)) {
      CliqueComplex complex(tree);
      for (int id = 0; id < static_cast<int>(complex.clique_count()); ++id) {
        ++small;
        if (oracle::stats(tree, CliqueScope{complex.clique(id)}).mean != k + 1) o.pass = false;
      }
    }
  }
  o.detail = describe(t) + "; n=k+2 cliques at mean k+1: " + std::to_string(small);
  return o;
}

// 3. Local mean below twice the global mean; brooms come close to the factor 2.
Outcome ac3() {
  Outcome o;
  const Tally t = tally({1, 2, 3}, "double_bound");
  Rational best = 0;
  int best_s = 0, best_m = 0;
  auto try_broom = [&](int s, int m) {
    if (s < 1 || m < 0 || s + m > 500) return;
    const KTree tree = families::make_k_broom(1, s, m);
    const Rational ratio = recurse::local_stats(tree, KClique{0}).mean / recurse::global_stats_fast(tree).mean;
    if (ratio > best) {
      best = ratio;
      best_s = s;
      best_m = m;
    }
  };
  for (int s = 10; s <= 500; s += 10) {
    for (int m = 0; s + m <= 500; m += 10) try_broom(s, m);
  }
  const int cs = best_s, cm = best_m;
  for (int s = cs - 9; s <= cs + 9; ++s) {
    for (int m = cm - 9; m <= cm + 9; ++m) try_broom(s, m);
  }
  o.pass = t.fail == 0 && t.pass > 0 && best >= Rational(9, 5);
  o.detail = describe(t) + "; best broom ratio " + fmt(to_double(best)) + " at s=" + std::to_string(best_s) +
             " m=" + std::to_string(best_m) + " (n=" + std::to_string(best_s + best_m) + ", C = handle end)";
  return o;
}

// 4. Series-reduced band, k-leaf count and characteristic trees.
Outcome ac4() {
  const Tally t = tally({1, 2, 3}, "series_reduced.");
  return {t.fail == 0 && t.pass > 0, describe(t) + " (records: upper, lower, leaves, char_tree, near_global)"};
}

// 5. Minimum global mean among series-reduced trees.
Outcome ac5() {
  Outcome o;
  // Spines with pendant leaf counts: n=6 and 7 are double stars.
  const std::map<int, std::string> expected{
      {6, "ktree 1 6\n0\n0\n0\n1\n1\n"},
      {7, "ktree 1 7\n0\n0\n0\n0\n1\n1\n"},
      {8, "ktree 1 8\n0\n1\n0\n0\n1\n2\n2\n"},
      {9, "ktree 1 9\n0\n1\n0\n0\n0\n1\n2\n2\n"},
      {10, "ktree 1 10\n0\n1\n2\n0\n0\n1\n2\n3\n3\n"},
      {11, serialize_ktc(families::make_k_star(1, 11))},
      {12, serialize_ktc(families::make_k_star(1, 12))},
  };
  std::string notes;
  for (const auto& [n, text] : expected) {
    const auto best =
        verify::top_ranks(verify::find_extremal(1, n, verify::Objective::MinGlobal, verify::Filter::SeriesReduced), 1);
    const bool ok = best.size() == 1 && best[0].code == hex(canonical_code(parse_ktc(text)));
    if (!ok) o.pass = false;
    notes += " n=" + std::to_string(n) + (ok ? ":ok" : ":MISMATCH(" + std::to_string(best.size()) + " minimizers)");
  }
  o.detail = "unique minimizer matches" + notes;
  return o;
}

// 6. k-star global mean.
Outcome ac6() {
  Outcome o;
  const int k = 2, n = 60;
  const auto s = recurse::global_stats_fast(families::make_k_star(k, n));
  const double gap = std::abs(to_double(s.mean) - (n + k) / 2.0);
  const bool closed = s.mean == recurse::k_star_global_mean_closed_form(k, n);
  std::size_t checked = 0;
  bool oracle_ok = true;
  for (int kk = 1; kk <= 2; ++kk) {
    for (int nn = kk; nn <= 10; ++nn) {
      ++checked;
      if (oracle::stats(families::make_k_star(kk, nn), GlobalScope{}).mean !=
          recurse::k_star_global_mean_closed_form(kk, nn)) {
        oracle_ok = false;
      }
    }
  }
  const Rational printed = recurse::k_star_global_mean_printed_form(1, 3);
  o.pass = gap < 0.01 && closed && oracle_ok;
  o.detail = "|mu - (n+k)/2| = " + fmt(gap, 3) + " at k=2 n=60; exact match with corrected form: " +
             (closed ? "yes" : "no") + "; corrected form = oracle on " + std::to_string(checked) +
             " stars: " + (oracle_ok ? "yes" : "no") + "; printed form at k=1 n=3 gives " + to_string(printed) +
             " vs 5/3";
  return o;
}

// 7. Caterpillar asymptotics and exact counts.
Outcome ac7() {
  Outcome o;
  std::string notes;
  for (int k : {2, 3}) {
    const int s = 200;
    const KTree t = families::make_k_caterpillar(k, s);
    const int n = t.order();
    const int l = s - k + 1;
    const auto g = recurse::global_stats_fast(t);
    const double mu_gap = std::abs(to_double(g.mean - (Rational(3 * n, 4) + Rational(k, 4) - Rational(37, 12))));
    const Rational count_ratio(g.count_containing, pow2(static_cast<unsigned>(l)));
    const bool ok = mu_gap <= 0.5 && abs(count_ratio - 9) <= Rational(9, 100);
    if (!ok) o.pass = false;
    notes += "k=" + std::to_string(k) + " n=" + std::to_string(n) + ": |mu - asymptote| = " + fmt(mu_gap, 4) +
             ", N/2^l = " + fmt(to_double(count_ratio), 10) + "; ";
  }
  bool exact = true, printed = true;
  for (int s : {4, 5, 6}) {
    const KTree t = families::make_k_caterpillar(2, s);
    const auto want = oracle::stats(t, GlobalScope{});
    const auto got = recurse::global_stats_fast(t);
    if (want.count_containing != got.count_containing || want.order_sum_containing != got.order_sum_containing) {
      exact = false;
    }
    const auto sums = recurse::caterpillar_printed_sums(2, s);
    if (sums.count != Rational(want.count_containing) || sums.order_sum != Rational(want.order_sum_containing)) {
      printed = false;
    }
  }
  if (!exact) o.pass = false;
  o.detail = notes + "oracle = recursion at k=2 s=4,5,6: " + (exact ? "yes" : "no") +
             "; printed N, R sums agree: " + (printed ? "yes" : "no");
  return o;
}

// 8. Path-type local mean closed form and its maximizer.
Outcome ac8() {
  Outcome o;
  std::size_t checked = 0;
  std::string notes;
  for (int k = 1; k <= 3; ++k) {
    for (int n = k + 1; n <= k + 8; ++n) {
      const KTree p = families::make_k_path(k, n);
      const auto subtrees = oracle::enumerate_sub_ktrees(p);
      CliqueComplex complex(p);
      Rational best = -1;
      int best_gap = 0;
      for (int id = 0; id < static_cast<int>(complex.clique_count()); ++id) {
        if (complex.degree(id) != 1) continue;
        // The block of P^{k+1} holding C is {a, ..., a+k}: a blocks on one side, b on the other.
        const KClique block = p.block(static_cast<std::size_t>(complex.blocks_of(id)[0]));
        const int a = block[0];
        const int b = n - k - 1 - a;
        const Rational mean = oracle::stats_from(p, subtrees, CliqueScope{complex.clique(id)}).mean;
        ++checked;
        if (mean != recurse::path_type_local_mean_closed_form(k, n, a, b)) {
          o.pass = false;
          notes += " mismatch k=" + std::to_string(k) + " n=" + std::to_string(n) + " C=" + complex.clique(id).str();
        }
        if (mean > best) {
          best = mean;
          best_gap = std::abs(a - b);
        } else if (mean == best) {
          best_gap = std::max(best_gap, std::abs(a - b));
        }
      }
      // For k = 1 the degree-1 cliques are the two endpoints only, so the
      // balance claim concerns k >= 2.
      if (k >= 2 && best_gap > 1) {
        o.pass = false;
        notes += " unbalanced argmax k=" + std::to_string(k) + " n=" + std::to_string(n);
      }
    }
  }
  o.detail = std::to_string(checked) + " degree-1 cliques match exactly; argmax |a-b| <= 1 for k=2,3" + notes;
  return o;
}

// 9. Structural lemmas.
Outcome ac9() {
  const Tally t = tally({1, 2, 3}, "structural.");
  return {t.fail == 0 && t.pass > 0, describe(t)};
}

// 10. Vertex versus clique local means; brooms maximize the local mean.
//
// Every maximizing pair (T, C) must have a characteristic tree that is a broom
// hanging from C. For k = 1 that makes T itself a broom with C a leaf; for
// k >= 2 several k-trees share that characteristic tree, so maximizers that
// are not k-brooms, or whose C is not simplicial, are counted and reported.
// At n = k+2 every clique ties, so the per-pair claims start at n = k+3.
Outcome ac10() {
  Outcome o;
  const Tally t = tally({2, 3}, "max_local.vertex_below_clique");
  o.pass = t.fail == 0 && t.pass > 0;
  std::size_t orders = 0, pairs = 0, other = 0;
  std::string notes;
  for (auto [k, n_max] : {std::pair{1, 10}, std::pair{2, 9}}) {
    for (int n = k + 1; n <= n_max; ++n) {
      ++orders;
      const auto best =
          verify::top_ranks(verify::find_extremal(k, n, verify::Objective::MaxLocal, verify::Filter::All), 1);
      bool some = false;
      for (const auto& e : best) {
        const bool broom = families::is_k_broom(e.tree);
        for (const KClique& c : e.witnesses) {
          const bool simplicial = is_simplicial(e.tree, c);
          some = some || (broom && simplicial);
          if (n < k + 3) continue;
          ++pairs;
          if (!broom || !simplicial) {
            ++other;
            if (k == 1) {
              o.pass = false;
              notes += " non-broom maximizer n=" + std::to_string(n);
            }
          }
          const auto ct = recurse::characteristic_tree(e.tree, c);
          if (!families::is_k_broom(ct.to_ktree()) || (ct.node_count() > 1 && ct.degrees()[0] != 1)) {
            o.pass = false;
            notes += " characteristic tree not a broom from C, k=" + std::to_string(k) + " n=" + std::to_string(n);
          }
        }
      }
      if (!some) {
        o.pass = false;
        notes += " no broom maximizer with simplicial C, k=" + std::to_string(k) + " n=" + std::to_string(n);
      }
    }
  }
  o.detail = describe(t) + "; a k-broom with simplicial C maximizes at all " + std::to_string(orders) +
             " orders; for n >= k+3 all " + std::to_string(pairs) + " maximizing (T, C) have a broom characteristic tree rooted at C; " +
             std::to_string(other) + " of them (all k=2) are not a k-broom with simplicial C" + notes;
  return o;
}

// 11. Auxiliary inequalities on the default grid.
Outcome ac11() {
  Outcome o;
  verify::AuxGrid grid;
  for (const auto& r : verify::check_aux_inequalities(grid)) {
    if (r.status != Status::Pass) o.pass = false;
    o.detail += r.check + " " + verify::to_string(r.status) + " (" + r.witness + "); ";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 oracle = recursion, k=1..3, n<=k+8", ac1},
      {"AC2 max local mean at degree-1 cliques", ac2},
      {"AC3 local mean below twice global", ac3},
      {"AC4 series-reduced band", ac4},
      {"AC5 series-reduced minimizers n=6..12", ac5},
      {"AC6 k-star asymptotics", ac6},
      {"AC7 caterpillar asymptotics", ac7},
      {"AC8 path-type closed form", ac8},
      {"AC9 structural lemmas", ac9},
      {"AC10 vertex below clique; broom maximizers", ac10},
      {"AC11 auxiliary inequalities", ac11},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " | " << o.detail << " [" << fmt(secs, 3) << "s]"
              << std::endl;
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
