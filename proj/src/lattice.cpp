#include "klab/lattice.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <tuple>

#include "klab/energy.hpp"
#include "klab/errors.hpp"

namespace klab {

namespace {

BigInt mod_big(const BigInt& x, const BigInt& m) {
  BigInt r = x % m;
  if (r < 0) r += m;
  return r;
}

void validate(const ReciprocalLattice& lat, const Box& box) {
  if (lat.m < 2) throw BadParameters("modulus must be >= 2");
  if (lat.lambda >= lat.m) throw BadParameters("lambda must be in [0, m)");
  if (box.A <= 0 || box.B <= 0) throw BadParameters("box half-widths must be positive");
}

BigInt abs_big(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

Rat sup_scaled_norm(const LatticeVector& w, const Box& box) {
  Rat su = Rat(abs_big(w.u)) / box.A;
  Rat sv = Rat(abs_big(w.v)) / box.B;
  return std::max(su, sv);
}

BigInt cross(const LatticeVector& a, const LatticeVector& b) {
  return a.u * b.v - a.v * b.u;
}

}  // namespace

PointCount lattice_points_in_box(const ReciprocalLattice& lat, const Box& box,
                                 bool collect_points) {
  validate(lat, box);
  BigInt A_floor = rat_floor(box.A);
  if (A_floor > 10'000'000) throw BudgetExceeded("box too wide to scan (A > 1e7)");
  const BigInt m = lat.m;
  const BigInt lam = lat.lambda;

  PointCount out;
  out.count = 0;
  if (collect_points) out.points.emplace();

  std::int64_t a = A_floor.convert_to<std::int64_t>();
  // residue of lambda*u, stepped as u increases
  BigInt r = mod_big(lam * BigInt(-a), m);
  for (std::int64_t u = -a; u <= a; ++u) {
    // v = r + t*m with -B <= v <= B
    BigInt t_hi = rat_floor((box.B - Rat(r)) / Rat(m));
    BigInt t_lo = rat_ceil((-box.B - Rat(r)) / Rat(m));
    if (t_hi >= t_lo) {
      out.count += t_hi - t_lo + 1;
      if (collect_points) {
        if (out.count > 2'000'000)
          throw BudgetExceeded("too many lattice points to collect");
        for (BigInt t = t_lo; t <= t_hi; ++t) {
          BigInt v = r + t * m;
          out.points->emplace_back(u, v.convert_to<std::int64_t>());
        }
      }
    }
    r += lam;
    if (r >= m) r -= m;
  }
  return out;
}

namespace {

struct ScaledBasis {
  LatticeVector b1, b2;
  Box box;

  Rat dot(const LatticeVector& p, const LatticeVector& q) const {
    return Rat(p.u * q.u) / (box.A * box.A) + Rat(p.v * q.v) / (box.B * box.B);
  }
  Rat norm2(const LatticeVector& p) const { return dot(p, p); }
};

// Lagrange-Gauss reduction under the box-scaled Euclidean norm. Exact.
void gauss_reduce(ScaledBasis& sb) {
  if (sb.norm2(sb.b1) > sb.norm2(sb.b2)) std::swap(sb.b1, sb.b2);
  for (int guard = 0; guard < 512; ++guard) {
    Rat n1 = sb.norm2(sb.b1);
    BigInt r = rat_round(sb.dot(sb.b1, sb.b2) / n1);
    sb.b2.u -= r * sb.b1.u;
    sb.b2.v -= r * sb.b1.v;
    if (sb.norm2(sb.b2) >= n1) return;
    std::swap(sb.b1, sb.b2);
  }
  throw Error("gauss reduction failed to terminate");  // cannot happen
}

// Integer c1 candidates that can minimize the (convex) scaled sup-norm of
// c1*b1 + c2*b2 along a fixed-c2 line: the V-vertices of |u| and |v|, the
// |u|/A = |v|/B crossings, and their neighbours (the nearest integer beating
// a vector we must exclude for independence reasons is adjacent to these).
void line_candidates(const ScaledBasis& sb, const BigInt& c2,
                     std::vector<BigInt>& out) {
  const auto& b1 = sb.b1;
  const auto& b2 = sb.b2;
  auto add_root = [&](const Rat& num, const Rat& den) {
    if (den == 0) return;
    Rat root = num / den;
    BigInt f = rat_floor(root);
    for (int d = -1; d <= 2; ++d) out.push_back(f + d);
  };
  Rat c2r(c2);
  add_root(-c2r * Rat(b2.u), Rat(b1.u));
  add_root(-c2r * Rat(b2.v), Rat(b1.v));
  // u/A = +-v/B
  add_root(-c2r * (Rat(b2.u) / sb.box.A - Rat(b2.v) / sb.box.B),
           Rat(b1.u) / sb.box.A - Rat(b1.v) / sb.box.B);
  add_root(-c2r * (Rat(b2.u) / sb.box.A + Rat(b2.v) / sb.box.B),
           Rat(b1.u) / sb.box.A + Rat(b1.v) / sb.box.B);
}

}  // namespace

MinimaPair successive_minima(const ReciprocalLattice& lat, const Box& box) {
  validate(lat, box);
  const BigInt m = lat.m;
  // Basis (1, lambda), (0, m); start from the symmetric representative.
  BigInt lam_sym = lat.lambda;
  if (lam_sym * 2 > m) lam_sym -= m;
  ScaledBasis sb{LatticeVector{1, lam_sym}, LatticeVector{0, m}, box};
  gauss_reduce(sb);
  assert(abs_big(cross(sb.b1, sb.b2)) == m);

  // Candidate integer combinations. For a Gauss-reduced basis the sup-norm
  // minima witnesses satisfy |c_i| <= 2, except possibly the c1 coordinate of
  // the second witness on an elongated lattice, which the per-line convex
  // search below recovers.
  std::set<std::pair<BigInt, BigInt>> coeffs;
  for (int c1 = -2; c1 <= 2; ++c1)
    for (int c2 = -2; c2 <= 2; ++c2) coeffs.emplace(c1, c2);
  for (int c2i = -2; c2i <= 2; ++c2i) {
    if (c2i == 0) continue;
    BigInt c2(c2i);
    std::vector<BigInt> c1s;
    line_candidates(sb, c2, c1s);
    for (const BigInt& c1 : c1s) coeffs.emplace(c1, c2);
  }

  struct Candidate {
    LatticeVector w;
    Rat s;
  };
  std::vector<Candidate> cands;
  cands.reserve(coeffs.size());
  for (const auto& [c1, c2] : coeffs) {
    if (c1 == 0 && c2 == 0) continue;
    LatticeVector w{c1 * sb.b1.u + c2 * sb.b2.u, c1 * sb.b1.v + c2 * sb.b2.v};
    cands.push_back({w, sup_scaled_norm(w, box)});
  }

  auto better = [](const Candidate& a, const Candidate& b) {
    return std::tie(a.s, a.w.u, a.w.v) < std::tie(b.s, b.w.u, b.w.v);
  };
  std::sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
    return better(a, b);
  });

  MinimaPair out;
  out.witness1 = cands.front().w;
  out.mu1 = cands.front().s;
  for (const auto& c : cands) {
    if (cross(c.w, out.witness1) != 0) {
      out.witness2 = c.w;
      out.mu2 = c.s;
      return out;
    }
  }
  throw Error("no independent second minimum found");  // cannot happen
}

MinimaPair successive_minima_exhaustive(const ReciprocalLattice& lat,
                                        const Box& box) {
  validate(lat, box);
  const BigInt m = lat.m;
  BigInt lam_sym = lat.lambda;
  if (lam_sym * 2 > m) lam_sym -= m;
  LatticeVector b1{1, lam_sym}, b2{0, m};
  // Two independent basis vectors fit inside S*D, so mu2 <= S.
  Rat S = std::max(sup_scaled_norm(b1, box), sup_scaled_norm(b2, box));

  BigInt U = rat_floor(S * box.A);
  if (U > 2'000'000) throw BudgetExceeded("exhaustive minima scan too wide");
  Rat V = S * box.B;

  struct Candidate {
    LatticeVector w;
    Rat s;
  };
  std::vector<Candidate> cands;
  const BigInt lam = lat.lambda;
  BigInt r = mod_big(lam * -U, m);
  for (BigInt u = -U; u <= U; ++u) {
    BigInt t_hi = rat_floor((V - Rat(r)) / Rat(m));
    BigInt t_lo = rat_ceil((-V - Rat(r)) / Rat(m));
    for (BigInt t = t_lo; t <= t_hi; ++t) {
      LatticeVector w{u, r + t * m};
      if (w.u == 0 && w.v == 0) continue;
      cands.push_back({w, sup_scaled_norm(w, box)});
      if (cands.size() > 8'000'000)
        throw BudgetExceeded("exhaustive minima scan too dense");
    }
    r += lam;
    if (r >= m) r -= m;
  }

  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.s, a.w.u, a.w.v) < std::tie(b.s, b.w.u, b.w.v);
  });
  MinimaPair out;
  out.witness1 = cands.front().w;
  out.mu1 = cands.front().s;
  for (const auto& c : cands) {
    if (cross(c.w, out.witness1) != 0) {
      out.witness2 = c.w;
      out.mu2 = c.s;
      return out;
    }
  }
  throw Error("exhaustive scan found no independent pair");  // cannot happen
}

namespace {

// Shared scaffolding for the exact lemma checks.
struct LatticeChecks {
  BigInt count;
  MinimaPair minima;
};

LatticeChecks compute_checks(const ReciprocalLattice& lat, const Box& box) {
  return {lattice_points_in_box(lat, box).count, successive_minima(lat, box)};
}

void add_lattice_params(BoundReport& rep, const ReciprocalLattice& lat,
                        const Box& box, const LatticeChecks& lc) {
  rep.add_param("lambda", lat.lambda);
  rep.add_param("m", lat.m);
  rep.add_param("A", rat_to_double(box.A));
  rep.add_param("B", rat_to_double(box.B));
  rep.add_param("mu1", rat_to_double(lc.minima.mu1));
  rep.add_param("mu2", rat_to_double(lc.minima.mu2));
  rep.add_param("mu1_exact", lc.minima.mu1.str());
  rep.add_param("mu2_exact", lc.minima.mu2.str());
  rep.add_param("points", lc.count.str());
}

}  // namespace

BoundReport lemma2_check(const ReciprocalLattice& lat, const Box& box) {
  LatticeChecks lc = compute_checks(lat, box);
  Rat rhs = (Rat(2) / lc.minima.mu1 + 1) * (Rat(4) / lc.minima.mu2 + 1);
  BoundReport rep;
  rep.label = "lemma2_point_bound";
  rep.lhs = lc.count.convert_to<double>();
  rep.rhs = rat_to_double(rhs);
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.holds = Rat(lc.count) <= rhs;  // exact
  add_lattice_params(rep, lat, box, lc);
  return rep;
}

BoundReport corollary2_check(const ReciprocalLattice& lat, const Box& box) {
  LatticeChecks lc = compute_checks(lat, box);
  Rat one(1);
  Rat lhs = std::min(lc.minima.mu1, one) * std::min(lc.minima.mu2, one);
  Rat rhs = Rat(15) / Rat(lc.count);  // count >= 1 (origin)
  BoundReport rep;
  rep.label = "corollary2_minima_bound";
  rep.lhs = rat_to_double(lhs);
  rep.rhs = rat_to_double(rhs);
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.holds = lhs <= rhs;  // exact
  add_lattice_params(rep, lat, box, lc);
  return rep;
}

BoundReport minkowski_band_check(const ReciprocalLattice& lat, const Box& box) {
  LatticeChecks lc = compute_checks(lat, box);
  Rat product = lc.minima.mu1 * lc.minima.mu2 * 4 * box.A * box.B;
  Rat lo = Rat(2) * Rat(lat.m), hi = Rat(4) * Rat(lat.m);
  BoundReport rep;
  rep.label = "minkowski_second_band";
  rep.lhs = rat_to_double(product);
  rep.rhs = rat_to_double(hi);
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.holds = lo <= product && product <= hi;  // exact
  add_lattice_params(rep, lat, box, lc);
  rep.add_param("band_lo", rat_to_double(lo));
  return rep;
}

namespace {

Box energy_box(int k, std::uint64_t N) {
  BigInt Nk = 1, Nk1 = 1;
  for (int i = 0; i < k - 1; ++i) Nk1 *= N;
  Nk = Nk1 * N;
  return Box{Rat(Nk), Rat(BigInt(k) * Nk1)};
}

}  // namespace

OmegaPartition omega_partition(int k, std::uint64_t N, std::uint64_t m) {
  if (m > 100'000) throw BudgetExceeded("omega partition: m > 1e5");
  if (std::pow(double(N), k) > 1e7) throw BudgetExceeded("omega partition: N^k > 1e7");

  OmegaPartition part;
  part.k = k;
  part.N = N;
  part.m = m;
  part.box = energy_box(k, N);

  EnergyQuery q{k, N, m, Restriction::kAllIntegers};
  EnergyCount energy = count_J2k(q, /*with_profile=*/true);
  part.j_lambda.assign(m, 0);
  for (const auto& [lam, c] : *energy.lambda_profile) part.j_lambda[lam] = c;

  part.classes.assign(m, OmegaClass::kNotInOmega);
  for (std::uint64_t lam = 1; lam < m; ++lam) {
    if (part.j_lambda[lam] == 0) continue;
    MinimaPair mp = successive_minima(ReciprocalLattice{lam, m}, part.box);
    if (mp.mu1 > 1) part.mu1_violations.push_back(lam);
    if (mp.mu2 <= 1) {
      part.classes[lam] = OmegaClass::kOmegaPrime;
      ++part.omega_prime_size;
    } else {
      part.classes[lam] = OmegaClass::kOmegaDoublePrime;
      ++part.omega_double_prime_size;
    }
  }
  return part;
}

BoundReport case1_bound_check(std::uint64_t lambda, const OmegaPartition& part) {
  if (lambda >= part.m || part.classes[lambda] != OmegaClass::kOmegaPrime)
    throw BadParameters("lambda is not in Omega'");
  ReciprocalLattice lat{lambda, part.m};
  BigInt count = lattice_points_in_box(lat, part.box).count;
  MinimaPair mp = successive_minima(lat, part.box);

  BigInt Nk1 = 1;  // N^{2k-1}
  for (int i = 0; i < 2 * part.k - 1; ++i) Nk1 *= part.N;
  Rat rhs = Rat(BigInt(30) * part.k * Nk1, BigInt(part.m));

  BigInt det = abs_big(cross(mp.witness1, mp.witness2));
  BoundReport rep;
  rep.label = "case1_point_bound";
  rep.lhs = count.convert_to<double>();
  rep.rhs = rat_to_double(rhs);
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.holds = Rat(count) <= rhs;  // exact
  rep.add_param("lambda", lambda);
  rep.add_param("m", part.m);
  rep.add_param("k", part.k);
  rep.add_param("N", part.N);
  rep.add_param("points", count.str());
  rep.add_param("witness_det", det.str());
  rep.add_param("det_ge_m", det >= part.m);
  return rep;
}

std::optional<Rat> case2_rational_witness(std::uint64_t lambda, int k,
                                          std::uint64_t N, std::uint64_t m) {
  if (std::pow(double(N), k) > 1e7) throw BudgetExceeded("case2 witness: N^k > 1e7");
  EnergyQuery q{k, N, m, Restriction::kAllIntegers};
  auto xs = admissible_values(q);
  Modulus mod(m);
  std::vector<std::uint64_t> invs;
  invs.reserve(xs.size());
  for (auto x : xs) invs.push_back(inv_u64(x % m, m));

  std::optional<Rat> witness;
  // depth-first over tuples carrying (inverse-sum mod m, exact rational sum)
  std::vector<std::size_t> idx(k, 0);
  struct Frame {
    std::uint64_t sum_mod;
    Rat sum_rat;
  };
  std::vector<Frame> stack(k + 1);
  stack[0] = {0, Rat(0)};
  int depth = 0;
  while (depth >= 0) {
    if (depth == k) {
      if (stack[k].sum_mod == lambda % m) {
        if (!witness) {
          witness = stack[k].sum_rat;
        } else if (*witness != stack[k].sum_rat) {
          throw WitnessViolation("two solutions with distinct rational sums");
        }
      }
      --depth;
      continue;
    }
    if (idx[depth] == xs.size()) {
      idx[depth] = 0;
      --depth;
      continue;
    }
    std::size_t i = idx[depth]++;
    stack[depth + 1] = {mod.add(stack[depth].sum_mod, invs[i]),
                        stack[depth].sum_rat + Rat(1, BigInt(xs[i]))};
    ++depth;
  }
  return witness;
}

}  // namespace klab
