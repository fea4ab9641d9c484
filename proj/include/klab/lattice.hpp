#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "klab/bigint.hpp"
#include "klab/report.hpp"
#include "klab/residue.hpp"

namespace klab {

/// The rank-2 lattice {(u, v) in Z^2 : lambda u = v (mod m)}, determinant m,
/// generated by (1, lambda) and (0, m).
struct ReciprocalLattice {
  std::uint64_t lambda;
  std::uint64_t m;
};

/// The symmetric box |u| <= A, |v| <= B. Half-widths are exact rationals:
/// the mu2 <= 1 / mu2 > 1 partition below is a hard split in the argument
/// being verified, so no verdict may depend on floating-point rounding.
struct Box {
  Rat A;
  Rat B;
};

struct LatticeVector {
  BigInt u;
  BigInt v;
};

/// Successive minima of the box with respect to the lattice, with witnesses:
/// witness_i lies in mu_i * Box, the witnesses are linearly independent, and
/// no lattice vector beats them (first minimum: any nonzero vector; second:
/// any vector independent of witness1).
struct MinimaPair {
  Rat mu1;
  Rat mu2;
  LatticeVector witness1;
  LatticeVector witness2;
};

struct PointCount {
  BigInt count;  // includes the origin
  std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> points;
};

/// Exact |Gamma_lambda n Box| by scanning u in [-floor(A), floor(A)] and
/// counting the arithmetic progression of admissible v. Guard: A <= 1e7.
PointCount lattice_points_in_box(const ReciprocalLattice& lat, const Box& box,
                                 bool collect_points = false);

/// Exact successive minima: Lagrange-Gauss reduction of the box-scaled basis
/// under the Euclidean norm, then enumeration of a provably sufficient set of
/// integer combinations, with sup-norm verdicts in exact rationals.
MinimaPair successive_minima(const ReciprocalLattice& lat, const Box& box);

/// Independent oracle: enumerates every lattice point of sup-scaled norm up
/// to an a-priori bound and reads the minima off the sorted list. Slow;
/// exists to cross-check successive_minima and must stay independent of it.
MinimaPair successive_minima_exhaustive(const ReciprocalLattice& lat,
                                        const Box& box);

/// |D n Gamma| <= prod_i (2i/mu_i + 1)  (n = 2). Exact comparison.
BoundReport lemma2_check(const ReciprocalLattice& lat, const Box& box);
/// min(mu1,1) * min(mu2,1) <= 15 / |D n Gamma|. Exact comparison.
BoundReport corollary2_check(const ReciprocalLattice& lat, const Box& box);
/// Minkowski's second-theorem band: 2m <= mu1 mu2 * 4AB <= 4m. Exact.
BoundReport minkowski_band_check(const ReciprocalLattice& lat, const Box& box);

enum class OmegaClass { kNotInOmega, kOmegaPrime, kOmegaDoublePrime };

/// The Omega partition at (k, N, m): for each lambda with J(lambda) >= 1,
/// the mu2-based split of the solution set, using the box
/// |u| <= N^k, |v| <= k N^{k-1}. Every lambda in Omega must have mu1 <= 1
/// (the solution-derived lattice vector lies in the box); violations are
/// collected rather than asserted so sweeps can report them.
struct OmegaPartition {
  int k = 1;
  std::uint64_t N = 1;
  std::uint64_t m = 2;
  Box box{Rat(1), Rat(1)};
  std::vector<OmegaClass> classes;             // indexed by lambda in [0, m)
  std::vector<std::uint64_t> j_lambda;         // J(lambda) per residue
  std::vector<std::uint64_t> mu1_violations;   // expected empty
  std::uint64_t omega_prime_size = 0;
  std::uint64_t omega_double_prime_size = 0;
};

OmegaPartition omega_partition(int k, std::uint64_t N, std::uint64_t m);

/// Case 1 of the energy proof: for lambda in Omega', the point count obeys
/// |Gamma_lambda n D| <= 30 k N^{2k-1} / m, and the two witnesses have
/// |u1 v2 - v1 u2| >= m. Throws BadParameters when lambda is not in Omega'.
BoundReport case1_bound_check(std::uint64_t lambda, const OmegaPartition& part);

/// Case 2: all solutions over lambda in Omega'' share one rational value
/// 1/x1 + ... + 1/xk. Returns it, nullopt when J(lambda) = 0, and throws
/// WitnessViolation if two solutions disagree (which would falsify the
/// dependence argument at these parameters).
std::optional<Rat> case2_rational_witness(std::uint64_t lambda, int k,
                                          std::uint64_t N, std::uint64_t m);

}  // namespace klab
