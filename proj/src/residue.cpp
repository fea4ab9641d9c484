#include "klab/residue.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace klab {

Modulus::Modulus(std::uint64_t m) : m_(m) {
  if (m < 2) throw BadParameters("modulus must be >= 2");
  if (m > kMaxModulus) throw BadParameters("modulus exceeds 2^62");
}

std::uint64_t Modulus::mul(std::uint64_t a, std::uint64_t b) const {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m_);
}

std::uint64_t Modulus::add(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t s = a + b;  // a, b < m <= 2^62, no wrap
  return s >= m_ ? s - m_ : s;
}

std::uint64_t Modulus::sub(std::uint64_t a, std::uint64_t b) const {
  return a >= b ? a - b : a + m_ - b;
}

std::uint64_t Modulus::reduce(std::int64_t x) const {
  std::int64_t m = static_cast<std::int64_t>(m_);
  std::int64_t r = x % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

UnitResidue::UnitResidue(std::uint64_t value, const Modulus& m)
    : value_(value % m.value()), modulus_(m.value()) {
  if (std::gcd(value_, modulus_) != 1)
    throw NotInvertible("residue is not a unit");
}

namespace {

// Extended Euclid on (x, m): returns y with x*y == 1 (mod m), or 0 if no unit.
std::uint64_t ext_euclid_inv(std::uint64_t x, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::uint64_t r = m, new_r = x;
  while (new_r != 0) {
    std::uint64_t q = r / new_r;
    std::int64_t tmp_t = t - static_cast<std::int64_t>(q) * new_t;
    t = new_t;
    new_t = tmp_t;
    std::uint64_t tmp_r = r - q * new_r;
    r = new_r;
    new_r = tmp_r;
  }
  if (r != 1) return 0;
  return t < 0 ? static_cast<std::uint64_t>(t + static_cast<std::int64_t>(m))
               : static_cast<std::uint64_t>(t);
}

}  // namespace

UnitResidue mod_inv(std::uint64_t x, const Modulus& m) {
  if (x == 0) throw NotInvertible("0 has no inverse");
  std::uint64_t xr = x % m.value();
  std::uint64_t y = ext_euclid_inv(xr, m.value());
  if (y == 0) throw NotInvertible("gcd(x, m) > 1");
  return UnitResidue(y, m);
}

std::uint64_t inv_u64(std::uint64_t x, std::uint64_t m) {
  std::uint64_t y = ext_euclid_inv(x % m, m);
  if (y == 0) throw NotInvertible("gcd(x, m) > 1");
  return y;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> batch_inverses(
    std::uint64_t M, std::uint64_t N, const Modulus& m) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  if (N == 0) return out;
  const std::uint64_t mm = m.value();

  std::vector<std::uint64_t> xs;
  xs.reserve(N);
  for (std::uint64_t i = 1; i <= N; ++i) {
    std::uint64_t x = M + i;
    if (std::gcd(x % mm, mm) == 1) xs.push_back(x);
  }
  if (xs.empty()) return out;

  // prefix[i] = x_0 * ... * x_i (mod m); invert the total once, unwind.
  std::vector<std::uint64_t> prefix(xs.size());
  std::uint64_t acc = 1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    acc = m.mul(acc, xs[i] % mm);
    prefix[i] = acc;
  }
  std::uint64_t inv_acc = inv_u64(acc, mm);

  out.resize(xs.size());
  for (std::size_t i = xs.size(); i-- > 0;) {
    std::uint64_t inv_xi =
        i == 0 ? inv_acc : m.mul(inv_acc, prefix[i - 1]);
    out[i] = {xs[i], inv_xi};
    inv_acc = m.mul(inv_acc, xs[i] % mm);
  }
  return out;
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  // This base set is deterministic for n < 2^64.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw BadParameters("factorize(0)");
  if (n > Modulus::kMaxModulus) throw BadParameters("input exceeds 2^62");
  Factorization f;
  auto push = [&f](std::uint64_t p, unsigned e) {
    f.prime_powers.emplace_back(p, e);
  };
  for (std::uint64_t p : {2ull, 3ull, 5ull}) {
    if (n % p == 0) {
      unsigned e = 0;
      while (n % p == 0) { n /= p; ++e; }
      push(p, e);
    }
  }
  // 2,3,5-wheel trial division up to 1e7.
  static constexpr std::uint64_t kTrialLimit = 10'000'000;
  static constexpr int wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  std::uint64_t d = 7;
  int wi = 0;
  while (d <= kTrialLimit && d * d <= n) {
    if (n % d == 0) {
      unsigned e = 0;
      while (n % d == 0) { n /= d; ++e; }
      push(d, e);
    }
    d += wheel[wi];
    wi = (wi + 1) & 7;
  }
  if (n > 1) {
    // Cofactor has no prime factor <= 1e7, so below 1e14 it must be prime.
    if (is_prime_u64(n)) {
      push(n, 1);
    } else {
      std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(double(n)));
      for (std::uint64_t c : {r - 1, r, r + 1}) {
        if (c > 1 && c * c == n && is_prime_u64(c)) {
          push(c, 2);
          n = 1;
          break;
        }
      }
      if (n != 1)
        throw BudgetExceeded("cofactor beyond trial-division budget");
    }
  }
  std::sort(f.prime_powers.begin(), f.prime_powers.end());
  return f;
}

int mobius(const Factorization& f) {
  for (const auto& [p, e] : f.prime_powers)
    if (e > 1) return 0;
  return f.prime_powers.size() % 2 == 0 ? 1 : -1;
}

std::uint64_t tau(const Factorization& f) {
  std::uint64_t t = 1;
  for (const auto& [p, e] : f.prime_powers) t *= (e + 1);
  return t;
}

std::uint64_t euler_phi(const Factorization& f) {
  std::uint64_t phi = 1;
  for (const auto& [p, e] : f.prime_powers) {
    std::uint64_t pe = 1;
    for (unsigned i = 1; i < e; ++i) pe *= p;
    phi *= pe * (p - 1);
  }
  return phi;
}

int mobius(std::uint64_t m) { return mobius(factorize(m)); }
std::uint64_t tau(std::uint64_t m) { return tau(factorize(m)); }
std::uint64_t euler_phi(std::uint64_t m) { return euler_phi(factorize(m)); }

std::vector<std::uint64_t> divisors(const Factorization& f) {
  std::vector<std::uint64_t> divs{1};
  for (const auto& [p, e] : f.prime_powers) {
    std::size_t base = divs.size();
    std::uint64_t pe = 1;
    for (unsigned i = 0; i < e; ++i) {
      pe *= p;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pe);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

}  // namespace klab
