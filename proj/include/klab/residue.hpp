#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "klab/errors.hpp"

namespace klab {

/// The ring Z_m. All congruence arithmetic in the library goes through this
/// type; residues are exact integers and products never round.
class Modulus {
 public:
  static constexpr std::uint64_t kMaxModulus = std::uint64_t(1) << 62;

  explicit Modulus(std::uint64_t m);
  std::uint64_t value() const { return m_; }

  // a*b mod m, exact for any residues a, b < m (128-bit intermediate).
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;
  // Reduce a signed value into [0, m).
  std::uint64_t reduce(std::int64_t x) const;

  friend bool operator==(const Modulus&, const Modulus&) = default;

 private:
  std::uint64_t m_;
};

/// An invertible residue: value in [1, m-1] with gcd(value, m) = 1.
class UnitResidue {
 public:
  UnitResidue(std::uint64_t value, const Modulus& m);
  std::uint64_t value() const { return value_; }
  std::uint64_t modulus() const { return modulus_; }

 private:
  std::uint64_t value_;
  std::uint64_t modulus_;
};

struct Factorization {
  // (prime, exponent), primes strictly increasing; empty for n = 1.
  std::vector<std::pair<std::uint64_t, unsigned>> prime_powers;
};

/// Multiplicative inverse of x modulo m (extended Euclid).
/// Throws NotInvertible when gcd(x, m) > 1.
UnitResidue mod_inv(std::uint64_t x, const Modulus& m);

// Raw inverse for hot loops; same contract as mod_inv.
std::uint64_t inv_u64(std::uint64_t x, std::uint64_t m);

/// Inverses of every x in [M+1, M+N] coprime to m, in increasing x order.
/// Non-coprime x are omitted. Uses one extended Euclid per batch via the
/// prefix-product trick; sweeps invert millions of elements.
std::vector<std::pair<std::uint64_t, std::uint64_t>> batch_inverses(
    std::uint64_t M, std::uint64_t N, const Modulus& m);

/// Exact prime factorization by trial division up to 1e7 plus a deterministic
/// primality check on the cofactor. Inputs capped at 2^62.
Factorization factorize(std::uint64_t n);

int mobius(std::uint64_t m);
std::uint64_t tau(std::uint64_t m);
std::uint64_t euler_phi(std::uint64_t m);

int mobius(const Factorization& f);
std::uint64_t tau(const Factorization& f);
std::uint64_t euler_phi(const Factorization& f);

/// All divisors of the factored integer, sorted increasing.
std::vector<std::uint64_t> divisors(const Factorization& f);

/// Deterministic Miller-Rabin, valid for all n < 2^64.
bool is_prime_u64(std::uint64_t n);

}  // namespace klab
