#pragma once

#include <string>
#include <tuple>

#include <boost/multiprecision/cpp_int.hpp>

namespace wtower {

using Integer = boost::multiprecision::cpp_int;

inline std::string to_string(const Integer& x) { return x.str(); }

// "+3", "-1", "+0": coefficient form used by the text formats.
inline std::string signed_string(const Integer& x) { return x.sign() < 0 ? x.str() : "+" + x.str(); }

inline Integer abs(const Integer& x) { return x.sign() < 0 ? Integer(-x) : x; }

// Nonnegative remainder for d > 0.
inline Integer floor_mod(const Integer& a, const Integer& d) {
  Integer r = a % d;
  if (r.sign() < 0) r += d;
  return r;
}

// Quotient rounded toward negative infinity, for d != 0.
inline Integer floor_div(const Integer& a, const Integer& d) {
  Integer q = a / d;
  if ((a % d) != 0 && ((a.sign() < 0) != (d.sign() < 0))) q -= 1;
  return q;
}

// Returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
inline std::tuple<Integer, Integer, Integer> extended_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r.sign() < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

}  // namespace wtower
