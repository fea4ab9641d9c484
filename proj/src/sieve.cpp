#include "klab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "klab/errors.hpp"
#include "klab/residue.hpp"

namespace klab {

bool PrimeTable::contains(std::uint64_t p) const {
  return std::binary_search(primes.begin(), primes.end(), p);
}

std::uint64_t PrimeTable::count_up_to(std::uint64_t x) const {
  if (x > limit) throw BadParameters("x beyond sieve limit");
  return static_cast<std::uint64_t>(
      std::upper_bound(primes.begin(), primes.end(), x) - primes.begin());
}

PrimeTable primes_up_to(std::uint64_t x) {
  if (x > 1'000'000'000) throw BudgetExceeded("sieve limit is 1e9");
  PrimeTable t;
  t.limit = x;
  if (x < 2) return t;
  std::vector<bool> composite(x + 1, false);
  for (std::uint64_t i = 2; i * i <= x; ++i) {
    if (composite[i]) continue;
    for (std::uint64_t j = i * i; j <= x; j += i) composite[j] = true;
  }
  for (std::uint64_t i = 2; i <= x; ++i)
    if (!composite[i]) t.primes.push_back(static_cast<std::uint32_t>(i));
  return t;
}

std::uint64_t prime_count_ap(const PrimeTable& table, std::uint64_t x,
                             std::uint64_t q, std::uint64_t a) {
  if (q < 1) throw BadParameters("q must be >= 1");
  if (std::gcd(a % q, q) != 1) throw BadParameters("gcd(a, q) must be 1");
  if (x > table.limit) throw BadParameters("x beyond sieve limit");
  std::uint64_t ar = a % q;
  std::uint64_t count = 0;
  for (std::uint32_t p : table.primes) {
    if (p > x) break;
    if (p % q == ar) ++count;
  }
  return count;
}

BoundReport bt_ratio(const PrimeTable& table, std::uint64_t x, std::uint64_t q,
                     std::uint64_t a) {
  if (q >= x) throw BadParameters("need q < x");
  std::uint64_t count = prime_count_ap(table, x, q, a);
  std::uint64_t phi = euler_phi(q);
  double log_xq = std::log(static_cast<double>(x) / static_cast<double>(q));
  double empirical_c = static_cast<double>(count) * static_cast<double>(phi) *
                       log_xq / static_cast<double>(x);
  BoundReport rep;
  rep.label = "bt_ratio";
  rep.lhs = empirical_c;
  rep.rhs = 2.0;  // classical Brun-Titchmarsh reference
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.holds = rep.lhs < 2.0;  // informational
  rep.add_param("x", x);
  rep.add_param("q", q);
  rep.add_param("a", a);
  rep.add_param("pi_x_q_a", count);
  rep.add_param("phi_q", phi);
  rep.add_param("theta", std::log(double(q)) / std::log(double(x)));
  return rep;
}

namespace {

// Count y-smooth numbers <= x by enumerating them: each smooth number is a
// unique non-decreasing product of primes <= y. Cost is linear in the count.
std::uint64_t count_smooth_dfs(const std::vector<std::uint32_t>& primes,
                               std::size_t start, std::uint64_t prod,
                               std::uint64_t x) {
  std::uint64_t count = 1;  // prod itself
  for (std::size_t i = start; i < primes.size(); ++i) {
    std::uint64_t p = primes[i];
    if (prod > x / p) break;  // primes ascend, later ones worse
    count += count_smooth_dfs(primes, i, prod * p, x);
  }
  return count;
}

}  // namespace

std::uint64_t psi(std::uint64_t x, std::uint64_t y) {
  if (x > 100'000'000) throw BudgetExceeded("psi limit is x <= 1e8");
  if (x == 0) return 0;
  if (y >= x) return x;
  if (y < 2) return 1;  // only 1 is 1-smooth
  PrimeTable t = primes_up_to(y);
  return count_smooth_dfs(t.primes, 0, 1, x);
}

BoundReport debruijn_report(std::uint64_t x, std::uint64_t y) {
  if (x < 2 || y < 2) throw BadParameters("need x, y >= 2");
  double u = std::log(double(x)) / std::log(double(y));
  std::uint64_t count = psi(x, y);
  BoundReport rep;
  rep.label = "debruijn_smooth_bound";
  rep.lhs = static_cast<double>(count) / static_cast<double>(x);
  rep.rhs = std::pow(u, -u);
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.holds = rep.lhs <= rep.rhs;  // informational, the o(1) is asymptotic
  rep.add_param("x", x);
  rep.add_param("y", y);
  rep.add_param("u", u);
  rep.add_param("psi", count);
  rep.add_param("trivial_regime", u <= 1.0);
  return rep;
}

FactorProfile factor_profile(std::uint64_t x, int r) {
  if (x < 1) throw BadParameters("x must be >= 1");
  if (r < 1) throw BadParameters("r must be >= 1");
  FactorProfile out;
  out.x = x;
  std::vector<std::uint64_t> all;
  for (const auto& [p, e] : factorize(x).prime_powers)
    for (unsigned i = 0; i < e; ++i) all.push_back(p);
  std::sort(all.rbegin(), all.rend());
  out.largest = all.empty() ? 1 : all.front();
  out.short_profile = all.size() < static_cast<std::size_t>(r);
  std::size_t keep = std::min<std::size_t>(all.size(), r);
  out.factors_desc.assign(all.begin(), all.begin() + keep);
  out.cofactor = x;
  for (std::uint64_t p : out.factors_desc) out.cofactor /= p;
  return out;
}

GSetResult g_set(const GSetParams& params) {
  const std::uint64_t N = params.N;
  const int r = params.r;
  if (N > 10'000'000) throw BudgetExceeded("g_set limit is N <= 1e7");
  if (N < 3) throw BadParameters("N too small");
  if (r < 1) throw BadParameters("r must be >= 1");
  if (!(params.beta > 0.0 && params.beta < params.alpha && params.alpha <= 0.1))
    throw BadParameters("need 0 < beta < alpha <= 0.1");
  if (params.beta1 && !(*params.beta1 > params.beta))
    throw BadParameters("need beta1 > beta");

  const double logN = std::log(static_cast<double>(N));
  GSetResult res;
  res.threshold_alpha = std::pow(double(N), params.alpha);
  res.threshold_beta = std::pow(double(N), params.beta);
  res.threshold_product = std::pow(double(N), 1.0 - params.beta);
  res.in_paper_window = params.alpha < 0.1 && params.beta > 1.0 / logN;
  double threshold_beta1 =
      params.beta1 ? std::pow(double(N), 1.0 - *params.beta1) : 0.0;

  // smallest-prime-factor sieve over [2, N-1]
  std::vector<std::uint32_t> spf(N, 0);
  for (std::uint64_t i = 2; i < N; ++i) {
    if (spf[i] != 0) continue;
    for (std::uint64_t j = i; j < N; j += i)
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
  }

  ++res.few_factors;  // x = 1 has no prime factors
  std::vector<std::uint64_t> factors;
  for (std::uint64_t x = 2; x < N; ++x) {
    factors.clear();
    std::uint64_t v = x;
    while (v > 1) {
      factors.push_back(spf[v]);
      v /= spf[v];
    }
    std::sort(factors.rbegin(), factors.rend());  // p_1 >= p_2 >= ...

    double p1 = static_cast<double>(factors.front());
    bool enough = factors.size() >= static_cast<std::size_t>(r);
    if (p1 < res.threshold_alpha) ++res.p1_small;
    if (!enough) {
      ++res.few_factors;
      continue;
    }
    double pr = static_cast<double>(factors[r - 1]);
    double prod = 1.0;
    for (int i = 0; i < r; ++i) prod *= static_cast<double>(factors[i]);
    if (pr < res.threshold_beta) ++res.pr_small;
    if (prod >= res.threshold_product) ++res.product_large;
    if (params.beta1 && r >= 2) {
      double prod1 = prod / static_cast<double>(factors[r - 1]);
      if (prod1 >= threshold_beta1) ++res.beta1_large;
    }
    if (p1 >= res.threshold_alpha && pr >= res.threshold_beta &&
        prod < res.threshold_product)
      ++res.g_count;
  }
  res.complement_total = (N - 1) - res.g_count;
  return res;
}

}  // namespace klab
