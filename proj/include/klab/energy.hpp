#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "klab/bigint.hpp"
#include "klab/report.hpp"
#include "klab/residue.hpp"

namespace klab {

enum class Restriction { kAllIntegers, kPrimesOnly };

/// Parameters of one additive-energy count: ordered k-tuples from
/// I = [1, N] (optionally primes only), inverse-sums taken mod m.
struct EnergyQuery {
  int k = 1;
  std::uint64_t N = 1;
  std::uint64_t m = 2;
  Restriction restriction = Restriction::kAllIntegers;
};

/// Exact solution count; the optional profile maps lambda -> J(lambda)
/// (residues with at least one solution), so count = sum of squares.
struct EnergyCount {
  EnergyQuery query;
  BigInt count;
  std::optional<std::map<std::uint64_t, std::uint64_t>> lambda_profile;
};

/// The variable set: x in [1, N] coprime to m, restricted to primes when the
/// query says so. Non-units are excluded (x* is undefined for them).
std::vector<std::uint64_t> admissible_values(const EnergyQuery& q);

/// J(lambda): ordered k-tuples of admissible x with x1* + ... + xk* = lambda
/// (mod m). Direct enumeration, deliberately not sharing the tally path.
BigInt count_J_lambda(std::uint64_t lambda, const EnergyQuery& q);

/// J_2k by the k-fold tally: bucket all k-fold inverse-sums by residue, then
/// sum squared multiplicities. Guard: (#admissible)^k <= 1e8.
EnergyCount count_J2k(const EnergyQuery& q, bool with_profile = false);

/// Literal 2k-fold loop. Guard: (#admissible)^(2k) <= 1e9.
EnergyCount count_J2k_bruteforce(const EnergyQuery& q);

/// Solutions of 1/x1 + ... + 1/xk = 1/x_{k+1} + ... + 1/x_{2k} over [1, N],
/// by tallying k-fold reciprocal sums as exact reduced fractions.
BigInt count_rational_energy(int k, std::uint64_t N);
BigInt count_rational_energy_bruteforce(int k, std::uint64_t N);

/// Almost-prime query: p_i primes in (K/2, K), q_i primes < L, 2L < K.
struct AlmostPrimeQuery {
  int k = 1;
  std::uint64_t K = 8;
  std::uint64_t L = 3;
  std::optional<std::uint64_t> m;
};

/// The (p, q) grid the almost-prime counts range over.
std::vector<std::pair<std::uint64_t, std::uint64_t>> almost_prime_pairs(
    const AlmostPrimeQuery& q);

/// T_2k(K, L): rational-equation count over products p_i q_i.
BigInt count_T2k(const AlmostPrimeQuery& q);
BigInt count_T2k_bruteforce(const AlmostPrimeQuery& q);

/// J_2k(K, L): the congruence version mod m; pairs with gcd(pq, m) > 1 are
/// skipped. Requires q.m.
BigInt count_J2k_KL(const AlmostPrimeQuery& q);
BigInt count_J2k_KL_bruteforce(const AlmostPrimeQuery& q);

// Literal bound checks. The rhs constants are assembled in log-space; holds
// compares in log-space too. Each report also records the structural ratio
// lhs / ((N^{2k-1}/m + 1) N^k) (resp. the analogue), which is the number
// worth watching at desk scale.
BoundReport theorem1_bound_report(const EnergyQuery& q);
BoundReport theorem2_bound_report(const EnergyQuery& q);
BoundReport lemma3_bound_report(int k, std::uint64_t N);
BoundReport lemma4_bound_report(const AlmostPrimeQuery& q);
BoundReport lemma5_bound_report(const AlmostPrimeQuery& q);

}  // namespace klab
