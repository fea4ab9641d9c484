#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "klab/bigint.hpp"

namespace klab {

// log(e^x + e^y) without overflow; the bound constants here routinely
// exceed double range.
inline double log_add_exp(double x, double y) {
  if (x < y) std::swap(x, y);
  if (std::isinf(x) && x < 0) return y;
  return x + std::log1p(std::exp(y - x));
}

// Natural log of a positive big integer (mantissa + msb, exact enough for
// report columns).
inline double log_bigint(const BigInt& x) {
  if (x <= 0) return -std::numeric_limits<double>::infinity();
  std::size_t bits = msb(x);  // index of highest set bit
  if (bits <= 1000) return std::log(x.convert_to<double>());
  BigInt top = x >> (bits - 52);
  return std::log(top.convert_to<double>()) +
         static_cast<double>(bits - 52) * std::numbers::ln2;
}

}  // namespace klab
