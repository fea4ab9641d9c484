#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "klab/report.hpp"

namespace klab {

/// All primes up to `limit`, sorted.
struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint32_t> primes;

  bool contains(std::uint64_t p) const;
  /// pi(x) for x <= limit.
  std::uint64_t count_up_to(std::uint64_t x) const;
};

/// Sieve of Eratosthenes. Guard: x <= 1e9.
PrimeTable primes_up_to(std::uint64_t x);

/// pi(x; q, a): primes p <= x with p = a (mod q). Requires gcd(a, q) = 1 and
/// x <= table.limit.
std::uint64_t prime_count_ap(const PrimeTable& table, std::uint64_t x,
                             std::uint64_t q, std::uint64_t a);

/// The empirical Brun-Titchmarsh constant pi(x;q,a) phi(q) log(x/q) / x
/// against the classical reference 2. A measurement: the sharpened constant
/// 2 - c1(1-theta)^2 is asymptotic and holds is informational only.
BoundReport bt_ratio(const PrimeTable& table, std::uint64_t x, std::uint64_t q,
                     std::uint64_t a);

/// Psi(x, y): positive integers <= x (including 1) free of prime factors > y.
/// Exact, by depth-first enumeration of y-smooth numbers. Guard: x <= 1e8.
std::uint64_t psi(std::uint64_t x, std::uint64_t y);

/// Psi(x,y)/x against u^{-u}, u = log x / log y. Measurement only.
BoundReport debruijn_report(std::uint64_t x, std::uint64_t y);

/// The r largest prime factors of x, multiplicity counted, so that
/// x = p_1 ... p_r * y with P(y) <= p_r. If x has fewer than r prime factors
/// the full (shorter) profile is returned and flagged.
struct FactorProfile {
  std::uint64_t x = 0;
  std::vector<std::uint64_t> factors_desc;  // kept factors, non-increasing
  std::uint64_t largest = 1;                // P(x); 1 when x = 1
  std::uint64_t cofactor = 1;               // y
  bool short_profile = false;
};
FactorProfile factor_profile(std::uint64_t x, int r);

/// Parameters of the set G = {x < N : p_1 >= N^alpha, p_r >= N^beta,
/// p_1...p_r < N^{1-beta}}. Requires 0 < beta < alpha <= 0.1; the asymptotic
/// window alpha < 0.1, beta > 1/log N is reported, not enforced (desk-scale
/// parameter points routinely sit outside it).
struct GSetParams {
  std::uint64_t N = 100;
  int r = 1;
  double alpha = 0.1;
  double beta = 0.05;
  std::optional<double> beta1;  // optional second parameter, reported only
};

struct GSetResult {
  std::uint64_t g_count = 0;
  std::uint64_t complement_total = 0;  // N - 1 - |G|, domain {1, ..., N-1}
  // Union-bound components (a single x may appear in several):
  std::uint64_t few_factors = 0;    // Omega(x) < r, includes x = 1
  std::uint64_t p1_small = 0;       // x >= 2 with p_1 < N^alpha
  std::uint64_t pr_small = 0;       // Omega(x) >= r, p_r < N^beta
  std::uint64_t product_large = 0;  // Omega(x) >= r, p_1...p_r >= N^{1-beta}
  std::uint64_t beta1_large = 0;    // p_1...p_{r-1} >= N^{1-beta1}, if beta1 set
  double threshold_alpha = 0.0;
  double threshold_beta = 0.0;
  double threshold_product = 0.0;
  bool in_paper_window = false;
};

/// Exact |G| plus the complement decomposition, by per-x factorization over a
/// smallest-prime-factor sieve. Guard: N <= 1e7.
GSetResult g_set(const GSetParams& params);

}  // namespace klab
