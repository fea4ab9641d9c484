#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace klab {

// Exact integer / rational types used wherever a verdict depends on the value.
// Solution counts can exceed 2^64 in sweeps, and the lattice-minima partition
// (mu2 <= 1 vs mu2 > 1) must never be decided in floating point.
using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rat& r) { return numerator(r); }
inline BigInt rat_den(const Rat& r) { return denominator(r); }

// floor(r) for an exact rational.
inline BigInt rat_floor(const Rat& r) {
  BigInt n = numerator(r), d = denominator(r);  // d > 0 by cpp_rational invariant
  BigInt q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

inline BigInt rat_ceil(const Rat& r) { return -rat_floor(-r); }

// Nearest integer, ties toward +infinity (only used where ties are harmless).
inline BigInt rat_round(const Rat& r) { return rat_floor(r + Rat(1, 2)); }

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

// Smallest integer c >= 0 with c*c >= x (x >= 0).
inline BigInt isqrt_ceil(const BigInt& x) {
  if (x <= 0) return 0;
  BigInt r = boost::multiprecision::sqrt(x);  // floor sqrt
  if (r * r < x) ++r;
  return r;
}

}  // namespace klab
