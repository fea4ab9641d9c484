#include "klab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>

#include "klab/errors.hpp"
#include "klab/numeric.hpp"

namespace klab {

namespace {

void validate(const EnergyQuery& q) {
  if (q.k < 1) throw BadParameters("k must be >= 1");
  if (q.N < 1) throw BadParameters("N must be >= 1");
  if (q.m < 2) throw BadParameters("m must be >= 2");
}

void check_budget(std::size_t base, int exponent, double budget,
                  const char* what) {
  double est = std::pow(static_cast<double>(base), exponent);
  if (est > budget) throw BudgetExceeded(what);
}

std::vector<bool> prime_flags(std::uint64_t n) {
  std::vector<bool> is_p(n + 1, true);
  if (n >= 0) is_p[0] = false;
  if (n >= 1) is_p[1] = false;
  for (std::uint64_t i = 2; i * i <= n; ++i)
    if (is_p[i])
      for (std::uint64_t j = i * i; j <= n; j += i) is_p[j] = false;
  return is_p;
}

// Residue tally abstraction: dense vector for small moduli, hash map above.
class ResidueTally {
 public:
  explicit ResidueTally(std::uint64_t m) : m_(m) {
    if (m <= kDenseLimit) dense_.assign(m, 0);
  }
  void bump(std::uint64_t r) {
    if (!dense_.empty())
      ++dense_[r];
    else
      ++sparse_[r];
  }
  template <typename F>
  void for_each(F&& f) const {
    if (!dense_.empty()) {
      for (std::uint64_t r = 0; r < m_; ++r)
        if (dense_[r]) f(r, dense_[r]);
    } else {
      for (const auto& [r, c] : sparse_) f(r, c);
    }
  }
  std::uint64_t at(std::uint64_t r) const {
    if (!dense_.empty()) return dense_[r];
    auto it = sparse_.find(r);
    return it == sparse_.end() ? 0 : it->second;
  }

 private:
  static constexpr std::uint64_t kDenseLimit = 1 << 22;
  std::uint64_t m_;
  std::vector<std::uint64_t> dense_;
  std::unordered_map<std::uint64_t, std::uint64_t> sparse_;
};

// Enumerate all k-fold sums (mod m) of values drawn from `residues`,
// invoking f(sum) once per ordered tuple.
template <typename F>
void sum_walk(const std::vector<std::uint64_t>& residues, const Modulus& m,
              int depth, std::uint64_t partial, F&& f) {
  if (depth == 0) {
    f(partial);
    return;
  }
  for (std::uint64_t r : residues) sum_walk(residues, m, depth - 1, m.add(partial, r), f);
}

std::vector<std::uint64_t> admissible_inverses(const EnergyQuery& q) {
  std::vector<std::uint64_t> invs;
  for (std::uint64_t x : admissible_values(q)) invs.push_back(inv_u64(x % q.m, q.m));
  return invs;
}

}  // namespace

std::vector<std::uint64_t> admissible_values(const EnergyQuery& q) {
  validate(q);
  std::vector<std::uint64_t> xs;
  std::vector<bool> is_p;
  if (q.restriction == Restriction::kPrimesOnly) is_p = prime_flags(q.N);
  for (std::uint64_t x = 1; x <= q.N; ++x) {
    if (std::gcd(x % q.m, q.m) != 1) continue;
    if (q.restriction == Restriction::kPrimesOnly && !is_p[x]) continue;
    xs.push_back(x);
  }
  return xs;
}

BigInt count_J_lambda(std::uint64_t lambda, const EnergyQuery& q) {
  validate(q);
  if (lambda >= q.m) throw BadParameters("lambda must satisfy 0 <= lambda < m");
  Modulus m(q.m);
  auto invs = admissible_inverses(q);
  check_budget(invs.size(), q.k, 1e8, "count_J_lambda enumeration");
  std::uint64_t hits = 0;
  sum_walk(invs, m, q.k, 0, [&](std::uint64_t s) {
    if (s == lambda) ++hits;
  });
  return BigInt(hits);
}

EnergyCount count_J2k(const EnergyQuery& q, bool with_profile) {
  validate(q);
  Modulus m(q.m);
  auto invs = admissible_inverses(q);
  check_budget(invs.size(), q.k, 1e8, "count_J2k enumeration");

  ResidueTally tally(q.m);
  sum_walk(invs, m, q.k, 0, [&](std::uint64_t s) { tally.bump(s); });

  EnergyCount out;
  out.query = q;
  out.count = 0;
  if (with_profile) out.lambda_profile.emplace();
  tally.for_each([&](std::uint64_t r, std::uint64_t c) {
    out.count += BigInt(c) * c;
    if (with_profile) (*out.lambda_profile)[r] = c;
  });
  return out;
}

EnergyCount count_J2k_bruteforce(const EnergyQuery& q) {
  validate(q);
  Modulus m(q.m);
  auto invs = admissible_inverses(q);
  check_budget(invs.size(), 2 * q.k, 1e9, "count_J2k_bruteforce enumeration");

  std::uint64_t hits = 0;
  sum_walk(invs, m, q.k, 0, [&](std::uint64_t s1) {
    sum_walk(invs, m, q.k, 0, [&](std::uint64_t s2) {
      if (s1 == s2) ++hits;
    });
  });
  EnergyCount out;
  out.query = q;
  out.count = hits;
  return out;
}

namespace {

// Exact reduced fraction on int64 with overflow checks; the enumeration
// budgets keep values small, but a sweep that would overflow must fail
// loudly, not wrap.
struct Frac {
  std::int64_t num = 0;
  std::int64_t den = 1;
  friend bool operator==(const Frac&, const Frac&) = default;
};

struct FracHash {
  std::size_t operator()(const Frac& f) const {
    std::uint64_t h = static_cast<std::uint64_t>(f.num) * 0x9e3779b97f4a7c15ull;
    h ^= static_cast<std::uint64_t>(f.den) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

std::int64_t checked_i64(__int128 v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    throw BudgetExceeded(what);
  return static_cast<std::int64_t>(v);
}

// f + 1/x
Frac add_reciprocal(const Frac& f, std::uint64_t x, const char* what) {
  __int128 num = static_cast<__int128>(f.num) * static_cast<std::int64_t>(x) + f.den;
  __int128 den = static_cast<__int128>(f.den) * static_cast<std::int64_t>(x);
  std::int64_t n64 = checked_i64(num, what);
  std::int64_t d64 = checked_i64(den, what);
  std::int64_t g = std::gcd(n64, d64);
  return Frac{n64 / g, d64 / g};
}

using FracTally = std::unordered_map<Frac, std::uint64_t, FracHash>;

template <typename F>
void reciprocal_sum_walk(const std::vector<std::uint64_t>& xs, int depth,
                         const Frac& partial, const char* what, F&& f) {
  if (depth == 0) {
    f(partial);
    return;
  }
  for (std::uint64_t x : xs)
    reciprocal_sum_walk(xs, depth - 1, add_reciprocal(partial, x, what), what, f);
}

BigInt square_sum(const FracTally& tally) {
  BigInt total = 0;
  for (const auto& [key, c] : tally) total += BigInt(c) * c;
  return total;
}

}  // namespace

BigInt count_rational_energy(int k, std::uint64_t N) {
  if (k < 1 || N < 1) throw BadParameters("k, N must be >= 1");
  check_budget(N, k, 1e8, "count_rational_energy enumeration");
  std::vector<std::uint64_t> xs(N);
  std::iota(xs.begin(), xs.end(), 1);
  FracTally tally;
  reciprocal_sum_walk(xs, k, Frac{}, "rational energy fraction overflow",
                      [&](const Frac& f) { ++tally[f]; });
  return square_sum(tally);
}

BigInt count_rational_energy_bruteforce(int k, std::uint64_t N) {
  if (k < 1 || N < 1) throw BadParameters("k, N must be >= 1");
  check_budget(N, 2 * k, 1e9, "count_rational_energy_bruteforce enumeration");
  std::vector<std::uint64_t> xs(N);
  std::iota(xs.begin(), xs.end(), 1);
  const char* what = "rational energy fraction overflow";
  std::uint64_t hits = 0;
  reciprocal_sum_walk(xs, k, Frac{}, what, [&](const Frac& lhs) {
    reciprocal_sum_walk(xs, k, Frac{}, what, [&](const Frac& rhs) {
      if (lhs == rhs) ++hits;
    });
  });
  return BigInt(hits);
}

namespace {

void validate(const AlmostPrimeQuery& q) {
  if (q.k < 1) throw BadParameters("k must be >= 1");
  if (q.K < 2 || q.L < 2) throw BadParameters("K, L must be >= 2");
  if (2 * q.L >= q.K) throw BadParameters("need 2L < K");
}

}  // namespace

std::vector<std::pair<std::uint64_t, std::uint64_t>> almost_prime_pairs(
    const AlmostPrimeQuery& q) {
  validate(q);
  auto is_p = prime_flags(q.K);
  std::vector<std::uint64_t> ps, qs;
  for (std::uint64_t p = q.K / 2 + 1; p < q.K; ++p)  // 0.5K < p < K, strict
    if (2 * p > q.K && is_p[p]) ps.push_back(p);
  for (std::uint64_t v = 2; v < q.L; ++v)
    if (is_p[v]) qs.push_back(v);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  for (auto p : ps)
    for (auto v : qs) pairs.emplace_back(p, v);
  return pairs;
}

namespace {

template <typename F>
void pair_reciprocal_walk(const std::vector<std::uint64_t>& products, int depth,
                          const Frac& partial, F&& f) {
  if (depth == 0) {
    f(partial);
    return;
  }
  for (std::uint64_t pq : products)
    pair_reciprocal_walk(products, depth - 1,
                         add_reciprocal(partial, pq, "almost-prime fraction overflow"),
                         f);
}

std::vector<std::uint64_t> pair_products(const AlmostPrimeQuery& q) {
  std::vector<std::uint64_t> prods;
  for (const auto& [p, v] : almost_prime_pairs(q)) prods.push_back(p * v);
  return prods;
}

}  // namespace

BigInt count_T2k(const AlmostPrimeQuery& q) {
  auto prods = pair_products(q);
  check_budget(prods.size(), q.k, 1e8, "count_T2k enumeration");
  FracTally tally;
  pair_reciprocal_walk(prods, q.k, Frac{}, [&](const Frac& f) { ++tally[f]; });
  return square_sum(tally);
}

BigInt count_T2k_bruteforce(const AlmostPrimeQuery& q) {
  auto prods = pair_products(q);
  check_budget(prods.size(), 2 * q.k, 1e9, "count_T2k_bruteforce enumeration");
  std::uint64_t hits = 0;
  pair_reciprocal_walk(prods, q.k, Frac{}, [&](const Frac& lhs) {
    pair_reciprocal_walk(prods, q.k, Frac{}, [&](const Frac& rhs) {
      if (lhs == rhs) ++hits;
    });
  });
  return BigInt(hits);
}

namespace {

std::vector<std::uint64_t> pair_inverses(const AlmostPrimeQuery& q,
                                         const Modulus& m) {
  std::vector<std::uint64_t> invs;
  for (std::uint64_t pq : pair_products(q)) {
    std::uint64_t r = pq % m.value();
    if (std::gcd(r, m.value()) != 1) continue;  // skipped, x* undefined
    invs.push_back(inv_u64(r, m.value()));
  }
  return invs;
}

}  // namespace

BigInt count_J2k_KL(const AlmostPrimeQuery& q) {
  if (!q.m) throw BadParameters("count_J2k_KL requires a modulus");
  Modulus m(*q.m);
  auto invs = pair_inverses(q, m);
  check_budget(invs.size(), q.k, 1e8, "count_J2k_KL enumeration");
  ResidueTally tally(m.value());
  sum_walk(invs, m, q.k, 0, [&](std::uint64_t s) { tally.bump(s); });
  BigInt total = 0;
  tally.for_each([&](std::uint64_t, std::uint64_t c) { total += BigInt(c) * c; });
  return total;
}

BigInt count_J2k_KL_bruteforce(const AlmostPrimeQuery& q) {
  if (!q.m) throw BadParameters("count_J2k_KL requires a modulus");
  Modulus m(*q.m);
  auto invs = pair_inverses(q, m);
  check_budget(invs.size(), 2 * q.k, 1e9, "count_J2k_KL_bruteforce enumeration");
  std::uint64_t hits = 0;
  sum_walk(invs, m, q.k, 0, [&](std::uint64_t s1) {
    sum_walk(invs, m, q.k, 0, [&](std::uint64_t s2) {
      if (s1 == s2) ++hits;
    });
  });
  return BigInt(hits);
}

namespace {

BoundReport count_vs_log_rhs(std::string label, const BigInt& count,
                             double log_rhs, double structural_rhs) {
  BoundReport rep;
  rep.label = std::move(label);
  rep.lhs = count.convert_to<double>();
  rep.rhs = std::exp(log_rhs);
  double log_lhs = log_bigint(count);
  rep.ratio = count == 0 ? 0.0 : std::exp(log_lhs - log_rhs);
  rep.holds = count == 0 || log_lhs <= log_rhs + 1e-9;
  rep.add_param("log_rhs", log_rhs);
  rep.add_param("structural_rhs", structural_rhs);
  rep.add_param("structural_ratio", structural_rhs > 0 ? rep.lhs / structural_rhs : 0.0);
  rep.add_param("tol", 1e-9);
  return rep;
}

}  // namespace

BoundReport theorem1_bound_report(const EnergyQuery& q) {
  if (q.restriction != Restriction::kAllIntegers)
    throw BadParameters("theorem1 applies to the unrestricted interval");
  if (q.N < 2) throw BadParameters("N must be >= 2 for the (log N) factor");
  EnergyCount c = count_J2k(q);
  double k = q.k, logN = std::log(double(q.N)), logm = std::log(double(q.m));
  double log_env = log_add_exp((2 * k - 1) * logN - logm, 0.0);  // N^{2k-1}/m + 1
  double log_rhs = 90.0 * k * k * k * std::log(2.0 * k) +
                   4.0 * k * k * std::log(logN) + log_env + k * logN;
  double structural = std::exp(log_env + k * logN);
  auto rep = count_vs_log_rhs("theorem1_bound", c.count, log_rhs, structural);
  rep.add_param("k", q.k);
  rep.add_param("N", q.N);
  rep.add_param("m", q.m);
  return rep;
}

BoundReport theorem2_bound_report(const EnergyQuery& q) {
  if (q.restriction != Restriction::kPrimesOnly)
    throw BadParameters("theorem2 applies to prime variables");
  EnergyCount c = count_J2k(q);
  double k = q.k, logN = std::log(double(q.N)), logm = std::log(double(q.m));
  double log_env = log_add_exp((2 * k - 1) * logN - logm, 0.0);
  double log_rhs = k * std::log(2.0 * k) + log_env + k * logN;
  double structural = std::exp(log_env + k * logN);
  auto rep = count_vs_log_rhs("theorem2_bound", c.count, log_rhs, structural);
  rep.add_param("k", q.k);
  rep.add_param("N", q.N);
  rep.add_param("m", q.m);
  return rep;
}

BoundReport lemma3_bound_report(int k, std::uint64_t N) {
  if (N < 2) throw BadParameters("N must be >= 2 for the (log N) factor");
  BigInt c = count_rational_energy(k, N);
  double kk = k, logN = std::log(double(N));
  double log_rhs = 80.0 * kk * kk * kk * std::log(2.0 * kk) +
                   4.0 * kk * kk * std::log(logN) + kk * logN;
  double structural = std::pow(double(N), double(k));
  auto rep = count_vs_log_rhs("lemma3_bound", c, log_rhs, structural);
  rep.add_param("k", k);
  rep.add_param("N", N);
  return rep;
}

BoundReport lemma4_bound_report(const AlmostPrimeQuery& q) {
  BigInt c = count_T2k(q);
  double k = q.k, logK = std::log(double(q.K)), logL = std::log(double(q.L));
  double log_rhs = 4.0 * k * std::log(k) + k * (logK - std::log(logK)) +
                   k * (logL - std::log(logL));
  double structural = std::exp(k * (logK + logL));  // (KL)^k
  auto rep = count_vs_log_rhs("lemma4_bound", c, log_rhs, structural);
  rep.add_param("k", q.k);
  rep.add_param("K", q.K);
  rep.add_param("L", q.L);
  return rep;
}

BoundReport lemma5_bound_report(const AlmostPrimeQuery& q) {
  if (!q.m) throw BadParameters("lemma5 requires a modulus");
  BigInt c = count_J2k_KL(q);
  double k = q.k, logKL = std::log(double(q.K)) + std::log(double(q.L));
  double logm = std::log(double(*q.m));
  double log_env = log_add_exp((2 * k - 1) * logKL - logm, 0.0);
  double log_rhs = 4.0 * k * std::log(k) + log_env + k * logKL;
  double structural = std::exp(log_env + k * logKL);
  auto rep = count_vs_log_rhs("lemma5_bound", c, log_rhs, structural);
  rep.add_param("k", q.k);
  rep.add_param("K", q.K);
  rep.add_param("L", q.L);
  rep.add_param("m", *q.m);
  return rep;
}

}  // namespace klab
