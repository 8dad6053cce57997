#pragma once

#include "ktree/error.hpp"
#include "ktree/number.hpp"

#include <boost/multiprecision/integer.hpp>

namespace ktree {

/// A closed rational interval [lo, hi].
struct Interval {
  Rational lo;
  Rational hi;
};

namespace detail {

inline bool is_power_of_two(const Natural& m) { return m > 0 && (m & (m - 1)) == 0; }

// 2 atanh(t) for 0 <= t < 1, as an interval from `terms` series terms plus the
// geometric tail bound 2 t^{2M+1} / ((2M+1)(1 - t^2)).
inline Interval two_atanh(const Rational& t, int terms) {
  Rational sum = 0;
  Rational power = t;
  const Rational t2 = t * t;
  for (int i = 0; i < terms; ++i) {
    sum += power / (2 * i + 1);
    power *= t2;
  }
  Rational tail = power / (Rational(2 * terms + 1) * (1 - t2));
  return Interval{2 * sum, 2 * (sum + tail)};
}

// ln m for a positive integer m: m = 2^e f with 1 <= f < 2, so
// ln m = e ln 2 + 2 atanh((f-1)/(f+1)).
inline Interval ln_natural(const Natural& m, int terms, const Interval& ln2) {
  const unsigned e = boost::multiprecision::msb(m);
  const Rational f(m, pow2(e));
  const Interval frac = two_atanh((f - 1) / (f + 1), terms);
  return Interval{ln2.lo * e + frac.lo, ln2.hi * e + frac.hi};
}

}  // namespace detail

/// Sign of log2(x) - w for rational x > 0: -1, 0 or +1. Decided exactly:
/// log2(x) is rational only when x is a power of two, and otherwise the
/// enclosing interval is narrowed until it excludes w.
inline int compare_log2(const Rational& x, const Rational& w) {
  if (x <= 0) throw InvalidArgument("log2 of a non-positive number");
  const Natural num = numerator_of(x);
  const Natural den = denominator_of(x);
  if (detail::is_power_of_two(num) && detail::is_power_of_two(den)) {
    const Rational exact = Rational(static_cast<long long>(boost::multiprecision::msb(num))) -
                           Rational(static_cast<long long>(boost::multiprecision::msb(den)));
    return exact < w ? -1 : (exact > w ? 1 : 0);
  }
  for (int terms = 8; terms <= (1 << 14); terms *= 2) {
    const Interval ln2 = detail::two_atanh(Rational(1, 3), terms);
    const Interval a = detail::ln_natural(num, terms, ln2);
    const Interval b = detail::ln_natural(den, terms, ln2);
    const Rational lo = a.lo - b.hi;
    const Rational hi = a.hi - b.lo;
    // Divide by ln 2 > 0, widening in the direction of each bound's sign.
    const Rational log_lo = lo >= 0 ? lo / ln2.hi : lo / ln2.lo;
    const Rational log_hi = hi >= 0 ? hi / ln2.lo : hi / ln2.hi;
    if (log_hi < w) return -1;
    if (log_lo > w) return 1;
  }
  throw Error("could not separate log2 from the target value");
}

/// Rational bounds on log2(x), tight to roughly 9^-terms relative error.
inline Interval log2_interval(const Rational& x, int terms = 16) {
  if (x <= 0) throw InvalidArgument("log2 of a non-positive number");
  const Interval ln2 = detail::two_atanh(Rational(1, 3), terms);
  const Interval a = detail::ln_natural(numerator_of(x), terms, ln2);
  const Interval b = detail::ln_natural(denominator_of(x), terms, ln2);
  const Rational lo = a.lo - b.hi;
  const Rational hi = a.hi - b.lo;
  return Interval{lo >= 0 ? lo / ln2.hi : lo / ln2.lo, hi >= 0 ? hi / ln2.lo : hi / ln2.hi};
}

/// Sign of x - n^3 / 2^{(n-k)/4} for rational x, decided exactly.
inline int compare_with_decay(const Rational& x, int n, int k) {
  if (x <= 0) return -1;
  // x vs n^3 2^{-(n-k)/4}  <=>  x^4 2^{n-k} vs n^12.
  Rational lhs = x * x * x * x;
  if (n - k >= 0) {
    lhs *= Rational(pow2(static_cast<unsigned>(n - k)));
  } else {
    lhs /= Rational(pow2(static_cast<unsigned>(k - n)));
  }
  Natural rhs = 1;
  for (int i = 0; i < 12; ++i) rhs *= n;
  const Rational r(rhs);
  return lhs < r ? -1 : (lhs > r ? 1 : 0);
}

}  // namespace ktree
