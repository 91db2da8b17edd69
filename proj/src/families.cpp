#include "factmod/families.hpp"

#include <cmath>
#include <stdexcept>

#include "factmod/parallel.hpp"

namespace factmod {

namespace {

double log10_abs(const BigInt& v) {
  BigInt a = boost::multiprecision::abs(v);
  if (a == 0) return -INFINITY;
  const unsigned bits = boost::multiprecision::msb(a);
  if (bits < 53) return std::log10(a.convert_to<double>());
  const unsigned shift = bits - 52;
  const double top = BigInt(a >> shift).convert_to<double>();
  return std::log10(top) + shift * std::log10(2.0);
}

const std::vector<u64>& trial_primes(u64 bound) {
  static thread_local u64 cached_bound = 0;
  static thread_local std::vector<u64> cached;
  if (cached_bound != bound) {
    cached = sieve_primes(bound);
    cached_bound = bound;
  }
  return cached;
}

template <class Compute>
void for_each_odd_prime_batched(u64 x, const ScanOptions& opts, Compute compute) {
  const std::size_t batch = std::max<std::size_t>(1, opts.batch);
  std::vector<u64> chunk;
  auto flush = [&] {
    compute(chunk);
    chunk.clear();
  };
  for_each_prime_segment(3, x, [&](const std::vector<u64>& seg) {
    for (u64 p : seg) {
      chunk.push_back(p);
      if (chunk.size() == batch) flush();
    }
  });
  if (!chunk.empty()) flush();
}

}  // namespace

FamilyPoly::FamilyPoly(int n) : n_(n) {
  if (n < 1 || n > kMaxFamilyIndex) {
    throw std::domain_error("family index n = " + std::to_string(n) + " outside [1, 64]");
  }
  PolyZ prod(std::vector<BigInt>{0, 1});
  for (int k = 1; k < n; ++k) prod = poly_mul(prod, PolyZ(std::vector<BigInt>{k, 1}));
  std::vector<BigInt> c = prod.coeffs();
  c[0] -= 1;
  poly_ = PolyZ(std::move(c));
}

const BigInt& FamilyPoly::discriminant() const {
  if (!disc_) disc_ = discriminant_z(poly_);
  return *disc_;
}

std::vector<u64> factorial_table(const PrimeCtx& ctx) {
  std::vector<u64> fact(ctx.p());
  fact[0] = 1;
  for (u64 k = 1; k < ctx.p(); ++k) fact[k] = ctx.mul(fact[k - 1], k);
  return fact;
}

bool root_forces_collision(u64 t0, int n, const std::vector<u64>& fact) noexcept {
  return fact[t0 + static_cast<u64>(n) - 1] == fact[t0 - 1];
}

RhoResult rho(const FamilyPoly& f, const PrimeCtx& ctx, u64 root_guard) {
  RhoResult r;
  r.n = f.n();
  r.p = ctx.p();
  const PolyFp fp = f.reduce(ctx);
  r.count = distinct_root_count(fp);
  if (ctx.p() > root_guard) return r;

  r.roots = roots_brute(fp, root_guard);
  const auto fact = factorial_table(ctx);
  const u64 span = static_cast<u64>(f.n()) - 1;
  for (u64 t0 : *r.roots) {
    if (t0 >= 1 && t0 + span <= ctx.p() - 1) {
      r.checked_roots.push_back(t0);
      if (!root_forces_collision(t0, f.n(), fact)) r.verified = false;
    } else {
      r.boundary_roots.push_back(t0);
    }
  }
  return r;
}

std::string to_csv_row(const RhoRow& r) {
  return std::to_string(r.p) + ',' + std::to_string(r.n) + ',' + std::to_string(r.rho);
}

RhoMeanReport rho_mean_scan(int n, u64 x, const ScanOptions& opts,
                            const std::function<void(const RhoRow&)>& emit) {
  if (!opts.force && (n > kRhoScanMaxN || x > kRhoScanMaxX)) {
    throw std::domain_error("rho_mean_scan: n <= 20 and x <= 10^7 unless forced");
  }
  const FamilyPoly f(n);
  const double lx = x > 2 ? std::log(static_cast<double>(x)) : 1.0;
  const double primes_est = static_cast<double>(x) / lx;
  enforce_budget(primes_est * n * n * std::log2(static_cast<double>(std::max<u64>(x, 2))) * 2,
                 opts.force, opts.budget);

  RhoMeanReport rep;
  rep.n = n;
  rep.x = x;
  for_each_odd_prime_batched(x, opts, [&](const std::vector<u64>& chunk) {
    auto counts = ordered_parallel_map(
        chunk, opts.threads, [] { return 0; },
        [&f](int&, u64 p) { return distinct_root_count(f.reduce(PrimeCtx(p))); });
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      ++rep.primes;
      rep.sum_rho += static_cast<u64>(counts[i]);
      ++rep.histogram[counts[i]];
      if (emit) emit(RhoRow{chunk[i], n, counts[i]});
    }
  });
  if (rep.primes == 0) throw std::domain_error("rho_mean_scan: no odd primes up to x");
  rep.mean = Rational(BigInt(rep.sum_rho), BigInt(rep.primes));
  rep.deviation = static_cast<double>(rep.sum_rho) / static_cast<double>(rep.primes) - 1.0;
  return rep;
}

MissedInequality missed_inequality_check(const PrimeCtx& ctx, int nmax) {
  if (nmax < 0 || nmax > 10) throw std::domain_error("missed_inequality_check: nmax in [0, 10]");
  if (static_cast<u64>(2 * nmax + 1) > ctx.p() - 2 && nmax > 0) {
    throw std::domain_error("missed_inequality_check: need 2*nmax+1 <= p-2");
  }
  MissedInequality out;
  out.p = ctx.p();
  out.nmax = nmax;
  out.missed = v_count(ctx, Window{0, ctx.p() - 1}).missed;
  for (int k = 1; k <= nmax; ++k) {
    const int c = distinct_root_count(FamilyPoly(2 * k + 1).reduce(ctx));
    out.terms.push_back(c);
    out.rho_sum += static_cast<u64>(c);
  }
  out.pass = out.missed >= out.rho_sum;
  return out;
}

SquarefreePart squarefree_part(const BigInt& v, u64 trial_bound) {
  SquarefreePart out;
  out.unfactored = 1;
  if (v == 0) {
    out.value = 0;
    return out;
  }
  BigInt a = boost::multiprecision::abs(v);
  BigInt result = 1;
  bool exhausted = false;
  for (u64 q : trial_primes(trial_bound)) {
    if (BigInt(q) * q > a) {
      exhausted = true;
      break;
    }
    int e = 0;
    while (a % q == 0) {
      a /= q;
      ++e;
    }
    if (e & 1) result *= q;
  }
  if (a > 1) {
    const BigInt b = trial_bound;
    if (exhausted || a < b * b) {
      result *= a;  // prime
    } else {
      const BigInt s = boost::multiprecision::sqrt(a);
      if (s * s == a) {
        // square cofactor contributes nothing
      } else if (a < b * b * b) {
        result *= a;  // q1*q2 with q1 != q2, both above the trial bound
      } else {
        result *= a;
        out.partial = true;
        out.unfactored = a;
      }
    }
  }
  out.value = v < 0 ? BigInt(-result) : result;
  return out;
}

bool disc_within_bound(const BigInt& v, int n) {
  BigInt bound = boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(10 * n * n));
  return boost::multiprecision::abs(v) <= bound;
}

DiscReport disc_family(int n, u64 trial_bound) {
  if (n < 1 || n > kDiscMaxN) throw std::domain_error("disc_family: n in [1, 24]");
  const FamilyPoly f(n);
  DiscReport rep;
  rep.n = n;
  rep.disc = f.discriminant();
  rep.squarefree = squarefree_part(rep.disc, trial_bound);
  if (n >= 2) {
    rep.log10_bound_ratio = log10_abs(rep.disc) - 10.0 * n * n * std::log10(static_cast<double>(n));
    rep.bound_ok = disc_within_bound(rep.disc, n);
  }
  return rep;
}

DisjointnessReport splitting_disjointness_proxy(int n1, int n2, u64 x, const ScanOptions& opts) {
  if (n1 == n2) throw std::domain_error("splitting_disjointness_proxy: n1 must differ from n2");
  if (n1 < 1 || n2 < 1 || n1 > 12 || n2 > 12) {
    throw std::domain_error("splitting_disjointness_proxy: indices in [1, 12]");
  }
  const double lx = x > 2 ? std::log(static_cast<double>(x)) : 1.0;
  enforce_budget(static_cast<double>(x) / lx * (n1 * n1 + n2 * n2) * 2 *
                     std::log2(static_cast<double>(std::max<u64>(x, 2))),
                 opts.force, opts.budget);

  DisjointnessReport rep;
  rep.n1 = n1;
  rep.n2 = n2;
  rep.x = x;
  const DiscReport d1 = disc_family(n1);
  const DiscReport d2 = disc_family(n2);
  rep.sqf1 = d1.squarefree;
  rep.sqf2 = d2.squarefree;
  rep.quadratic_comparison_conclusive = !d1.squarefree.partial && !d2.squarefree.partial;
  rep.quadratic_subfields_differ =
      rep.quadratic_comparison_conclusive && d1.squarefree.value != d2.squarefree.value;

  const FamilyPoly f1(n1);
  const FamilyPoly f2(n2);
  u64 c1 = 0, c2 = 0, c12 = 0;
  for_each_odd_prime_batched(x, opts, [&](const std::vector<u64>& chunk) {
    auto events = ordered_parallel_map(
        chunk, opts.threads, [] { return 0; }, [&](int&, u64 p) {
          const PrimeCtx ctx(p);
          const bool e1 = distinct_root_count(f1.reduce(ctx)) > 0;
          const bool e2 = distinct_root_count(f2.reduce(ctx)) > 0;
          return static_cast<int>(e1) | (static_cast<int>(e2) << 1);
        });
    for (int e : events) {
      ++rep.primes;
      c1 += e & 1;
      c2 += (e >> 1) & 1;
      c12 += (e == 3);
    }
  });
  if (rep.primes == 0) return rep;
  const double N = static_cast<double>(rep.primes);
  rep.freq1 = c1 / N;
  rep.freq2 = c2 / N;
  rep.joint = c12 / N;
  rep.product = rep.freq1 * rep.freq2;
  rep.std_error = std::sqrt(rep.product * (1.0 - rep.product) / N);
  rep.z_score = rep.std_error > 0 ? (rep.joint - rep.product) / rep.std_error : 0.0;
  return rep;
}

}  // namespace factmod
