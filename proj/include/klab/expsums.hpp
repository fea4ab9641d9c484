#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "klab/report.hpp"
#include "klab/residue.hpp"

namespace klab {

/// A complex exponential-sum value with an accumulated absolute error bound.
/// Summation is compensated (Kahan); `err` is maintained so that
/// err <= n_terms * 16 * eps * (1 + |value|) and the true sum lies within
/// `err` of (real, imag). Bound checks add `err` to their tolerance so a
/// rounding artifact can never flip a verdict.
struct ExpSumValue {
  double real = 0.0;
  double imag = 0.0;
  double err = 0.0;
  std::int64_t n_terms = 0;

  std::complex<double> value() const { return {real, imag}; }
  double abs() const { return std::hypot(real, imag); }
};

/// Bounded coefficients alpha(1..N) with |alpha(x)| <= 1, checked at
/// construction.
class CoefficientVector {
 public:
  explicit CoefficientVector(std::vector<std::complex<double>> values);

  static CoefficientVector ones(std::size_t n);
  /// Uniform random phases e^{i theta}, deterministic in `seed`.
  static CoefficientVector random_unimodular(std::size_t n, std::uint64_t seed);
  /// Random +-1 signs, deterministic in `seed`.
  static CoefficientVector random_signs(std::size_t n, std::uint64_t seed);

  std::complex<double> at(std::size_t i) const { return values_[i - 1]; }  // 1-based
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<std::complex<double>> values_;
};

/// e_m(z) = e^{2 pi i z / m}, argument reduced mod m before evaluation.
ExpSumValue e_m(std::int64_t z, const Modulus& m);

/// Complete Kloosterman sum: sum over x in [1, m], gcd(x, m) = 1, of
/// e_m(a x* + b x). Requires gcd(a, m) = 1.
ExpSumValue complete_kloosterman(std::int64_t a, std::int64_t b, const Modulus& m);

/// Incomplete sum over x in [M+1, M+N] with gcd(x, m) = 1; an empty or fully
/// non-coprime range is exactly zero.
ExpSumValue incomplete_kloosterman(std::int64_t a, std::int64_t b, const Modulus& m,
                                   std::uint64_t M, std::uint64_t N);

/// S = sum_{x1 <= N1} sum_{x2 <= N2} a1(x1) a2(x2) e_m(a x1* x2*),
/// skipping non-unit x1, x2.
ExpSumValue bilinear_kloosterman(std::int64_t a, const Modulus& m,
                                 std::uint64_t N1, std::uint64_t N2,
                                 const CoefficientVector& alpha1,
                                 const CoefficientVector& alpha2);

/// k-fold product sum: sum over (x1..xk) in A1 x ... x Ak of
/// e_q(xi * x1 * ... * xk); products are reduced mod q at every step.
ExpSumValue multilinear_sum(const std::vector<std::vector<std::uint64_t>>& sets,
                            std::uint64_t xi, const Modulus& q);

/// max over unit xi of |multilinear_sum| against the trivial bound
/// |A_1|...|A_k|. The ratio column is the payload (the empirical decay);
/// holds is the trivial bound and is always true.
BoundReport multilinear_decay_scan(const std::vector<std::vector<std::uint64_t>>& sets,
                                   const Modulus& q);

/// For each divisor q1 | q with q1 > q^eps: the maximal fiber
/// max_xi #{x in A : x = xi (mod q1)} against q1^{-gamma} |A| (strict <).
std::vector<BoundReport> fiber_condition_check(const std::vector<std::uint64_t>& A,
                                               const Modulus& q, double gamma,
                                               double eps);

/// |K(a, b; m)| <= tau(m) sqrt(m), tolerance err + 1e-6.
BoundReport weil_bound_check(std::int64_t a, std::int64_t b, const Modulus& m);

/// The bilinear-sum bound with its full constant; rhs is assembled in
/// log-space since (2k)^{45k^2/k'} overflows double for moderate k. Also
/// records lhs/(N1 N2) next to the bracket product alone, which is the
/// informative comparison at desk scale.
BoundReport theorem3_bound_check(std::uint64_t N1, std::uint64_t N2, int k1, int k2,
                                 std::int64_t a, const Modulus& m,
                                 const CoefficientVector& alpha1,
                                 const CoefficientVector& alpha2);

/// max over unit a of |sum_{n <= N, gcd(n,m)=1} e_m(a n*)|.
struct ShortSumScan {
  double max_abs = 0.0;
  std::uint64_t argmax_a = 0;
  std::int64_t n_terms = 0;  // unit n counted per sum
  double err = 0.0;
};
ShortSumScan short_kloosterman_scan(std::uint64_t N, const Modulus& m);

}  // namespace klab
