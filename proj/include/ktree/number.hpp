#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace ktree {

// Exact counts grow like 2^(n-k); everything that touches N or R stays exact.
using Natural = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Natural pow2(unsigned exponent) {
  Natural value = 1;
  value <<= exponent;
  return value;
}

inline Natural numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Natural denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Rational ratio(const Natural& num, const Natural& den) { return Rational(num, den); }

inline std::string to_string(const Natural& value) { return value.str(); }

// "num/den", always with an explicit denominator.
inline std::string to_string(const Rational& value) {
  return numerator_of(value).str() + "/" + denominator_of(value).str();
}

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

inline bool is_integer(const Rational& value) { return denominator_of(value) == 1; }

// Smallest integer >= value.
inline Natural ceil_of(const Rational& value) {
  Natural num = numerator_of(value);
  Natural den = denominator_of(value);
  Natural q = num / den;  // truncates toward zero
  if (q * den != num && num > 0) q += 1;
  return q;
}

inline Natural floor_of(const Rational& value) {
  Natural num = numerator_of(value);
  Natural den = denominator_of(value);
  Natural q = num / den;
  if (q * den != num && num < 0) q -= 1;
  return q;
}

/// Parses "p/q" or "p" into a rational. Throws std::invalid_argument on junk.
inline Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(Natural(text));
    Natural num(text.substr(0, slash));
    Natural den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("not a rational: " + text);
  }
}

}  // namespace ktree
