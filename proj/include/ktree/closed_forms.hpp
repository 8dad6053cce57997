#pragma once

#include "ktree/error.hpp"
#include "ktree/number.hpp"

#include <string>

namespace ktree::recurse {

namespace detail {

inline void require_split(int k, int n, int a, int b) {
  if (k < 1) throw InvalidArgument("k must be positive");
  if (a < 0 || b < 0) throw InvalidArgument("a and b must be non-negative");
  if (a + b != n - k - 1) {
    throw InvalidArgument("a + b must equal n - k - 1 = " + std::to_string(n - k - 1) + ", got " +
                          std::to_string(a + b));
  }
}

}  // namespace detail

/// Local mean order at a degree-1 clique C of the k-path P^{k+1} that has a
/// vertices of the path on one side of its (k+1)-clique and b on the other:
///
///   mu(T;C) = (n+k+1)/2 - (n-k+1) / (2((a+1)(b+1)+1)).
///
/// Only the second term depends on the split, so the maximum over a+b fixed
/// is at |a-b| <= 1.
inline Rational path_type_local_mean_closed_form(int k, int n, int a, int b) {
  detail::require_split(k, n, a, b);
  const Natural product = Natural(a + 1) * (b + 1) + 1;
  return Rational(n + k + 1, 2) - Rational(Natural(n - k + 1), 2 * product);
}

/// The same quantity as printed in the source literature,
/// (n+k)/2 - (n-k) / (2((a+1)(b+1)+1)). It disagrees with direct counting
/// (for k = 2, n = 7, a = b = 2 it gives 17/4 where the count gives 47/10);
/// kept for comparison only.
inline Rational path_type_local_mean_printed_form(int k, int n, int a, int b) {
  detail::require_split(k, n, a, b);
  const Natural product = Natural(a + 1) * (b + 1) + 1;
  return Rational(n + k, 2) - Rational(Natural(n - k), 2 * product);
}

/// Global mean order of the k-star on n vertices:
/// ((n+k) 2^{n-k-1} + k^2 (n-k)) / (2^{n-k} + (n-k) k).
/// The sub-k-trees are the base clique plus any set of apexes, and the k
/// other k-subcliques of each apex's (k+1)-clique on their own.
inline Rational k_star_global_mean_closed_form(int k, int n) {
  if (k < 1 || n < k) throw InvalidArgument("k-star needs 1 <= k <= n");
  const int m = n - k;
  // (n+k) 2^{m-1} written as (n+k) 2^m / 2 to stay integral at m = 0.
  const Rational numerator = Rational(Natural(n + k) * pow2(m), 2) + Natural(k) * k * m;
  const Natural denominator = pow2(m) + Natural(m) * k;
  return numerator / Rational(denominator);
}

/// The k-star global mean as printed in the source literature, without the
/// k^2 (n-k) term.
inline Rational k_star_global_mean_printed_form(int k, int n) {
  if (k < 1 || n < k) throw InvalidArgument("k-star needs 1 <= k <= n");
  const int m = n - k;
  const Rational numerator = Rational(Natural(n + k) * pow2(m), 2);
  return numerator / Rational(pow2(m) + Natural(m) * k);
}

/// The published four-term sums for N(T) and R(T) of the k-caterpillar with a
/// stem of s vertices (l = s - k + 1, n = 2s + 3 - k):
///
///   N = (k(n-k)+1-l) + 2^{l+2} + 2 sum_{i=2}^{l} 2^i + sum_{i=3}^{s-k+1} (i-2) 2^{l+1-i}
///   R = (k(n-k)+1-l) k + 2^{l+2} (s + (l+2)/2)
///       + 2 sum_{i=2}^{l} 2^i (k+i-2 + i/2)
///       + sum_{i=3}^{s-k+1} (i-2) 2^{l+1-i} (s+1-i + (l+1-i)/2)
struct CaterpillarSums {
  Rational count;
  Rational order_sum;
};

inline CaterpillarSums caterpillar_printed_sums(int k, int s) {
  if (k < 1 || s < k + 1) throw InvalidArgument("k-caterpillar needs s >= k + 1");
  const int l = s - k + 1;
  const int n = 2 * s + 3 - k;
  const Natural small = Natural(k) * (n - k) + 1 - l;
  CaterpillarSums out;
  out.count = Rational(small) + Rational(pow2(l + 2));
  out.order_sum = Rational(small * k) + Rational(pow2(l + 2)) * (Rational(s) + Rational(l + 2, 2));
  for (int i = 2; i <= l; ++i) {
    out.count += Rational(2 * pow2(i));
    out.order_sum += Rational(2 * pow2(i)) * (Rational(k + i - 2) + Rational(i, 2));
  }
  for (int i = 3; i <= s - k + 1; ++i) {
    // 2^{l+1-i} >= 1 since i <= l.
    const Natural weight = Natural(i - 2) * pow2(l + 1 - i);
    out.count += Rational(weight);
    out.order_sum += Rational(weight) * (Rational(s + 1 - i) + Rational(l + 1 - i, 2));
  }
  return out;
}

/// The minimum global mean over k-trees on n vertices, attained exactly by the
/// path-type ones: C(n-k+2,3) / (C(n-k+1,2) + (n-k)k + 1) + k.
inline Rational path_type_global_minimum(int k, int n) {
  if (k < 1 || n < k) throw InvalidArgument("need 1 <= k <= n");
  const Natural m = n - k;
  const Natural choose3 = (m + 2) * (m + 1) * m / 6;
  const Natural choose2 = (m + 1) * m / 2;
  return Rational(choose3) / Rational(choose2 + m * k + 1) + k;
}

}  // namespace ktree::recurse
