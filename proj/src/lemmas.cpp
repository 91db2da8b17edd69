#include "factmod/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace factmod {

bool quadratic_hits(const PrimeCtx& ctx, const Quadratic& q, u64 y) noexcept {
  // 4P(x) = (2x + b)^2 + 4c - b^2, so y is a value iff 4y + b^2 - 4c is a square.
  const u64 b = ctx.reduce(q.b);
  const u64 c = ctx.reduce(q.c);
  const u64 disc = ctx.sub(ctx.add(ctx.mul(4 % ctx.p(), ctx.reduce(y)), ctx.mul(b, b)),
                           ctx.mul(4 % ctx.p(), c));
  return legendre(static_cast<i64>(disc), ctx) >= 0;
}

BurgessCount burgess_count(const PrimeCtx& ctx, const Quadratic& q, u64 H, u64 N) {
  if (N >= ctx.p()) {
    throw std::domain_error("burgess_count: window of N+1 values wider than p");
  }
  BurgessCount out;
  for (u64 i = 0; i <= N; ++i) {
    if (quadratic_hits(ctx, q, ctx.reduce(H) + i)) ++out.count;
  }
  const double p = static_cast<double>(ctx.p());
  out.deviation = static_cast<double>(out.count) - static_cast<double>(N) / 2.0;
  out.envelope = 3.0 * std::sqrt(p) * std::log(p);
  out.within_envelope = std::abs(out.deviation) <= out.envelope;
  return out;
}

u64 quadratic_image_count_brute(const PrimeCtx& ctx, const Quadratic& q, u64 H, u64 N) {
  if (N >= ctx.p()) {
    throw std::domain_error("quadratic_image_count_brute: window wider than p");
  }
  std::vector<char> image(ctx.p(), 0);
  const u64 b = ctx.reduce(q.b);
  const u64 c = ctx.reduce(q.c);
  for (u64 x = 0; x < ctx.p(); ++x) image[ctx.add(ctx.mul(x, ctx.add(x, b)), c)] = 1;
  u64 count = 0;
  for (u64 i = 0; i <= N; ++i) count += image[(ctx.reduce(H) + i) % ctx.p()];
  return count;
}

u64 difference_count(std::span<const u64> s, u64 d) noexcept {
  u64 count = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const u64 target = s[i] + d;
    while (j < s.size() && s[j] < target) ++j;
    if (j == s.size()) break;
    if (s[j] == target) ++count;
  }
  return count;
}

ShiftWitness sieve_shift_find(std::vector<u64> S, u64 H, u64 N) {
  if (N == 0) throw std::domain_error("sieve_shift_find: N must be positive");
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  if (S.empty()) throw std::domain_error("sieve_shift_find: empty set");
  if (S.front() < H || S.back() - H > N) {
    throw std::domain_error("sieve_shift_find: set leaves the window [H, H+N]");
  }
  const u64 size = S.size();
  ShiftWitness w;
  w.alpha = static_cast<double>(size) / static_cast<double>(N);
  w.max_shift = (N + size - 1) / size;
  w.guarantee = w.alpha * w.alpha * w.alpha * static_cast<double>(N) / 2.0;
  w.d = 1;
  w.pair_count = 0;
  for (u64 d = 1; d <= w.max_shift; ++d) {
    const u64 c = difference_count(S, d);
    if (c > w.pair_count) {
      w.pair_count = c;
      w.d = d;
    }
  }
  // pair_count >= alpha^3 N / 2  <=>  2 pair_count N^2 >= |S|^3
  const u128 lhs = static_cast<u128>(2) * w.pair_count * N * N;
  const u128 rhs = static_cast<u128>(size) * size * size;
  const u128 two_n2 = static_cast<u128>(2) * N * N;
  w.vacuous = rhs < two_n2;
  w.holds = w.vacuous || lhs >= rhs;
  return w;
}

Lemma3Result lemma3_count(const PrimeCtx& ctx, const PolyFp& P, u64 H, u64 N) {
  if (P.degree() > 8) throw std::domain_error("lemma3_count: deg P must be <= 8");
  if (!(P.ctx() == ctx)) throw std::domain_error("lemma3_count: P is over a different prime");
  Lemma3Result out;
  out.range = effective_range(ctx, Window{H, N});
  FactorialStream s(ctx, out.range.lo);
  for (;;) {
    const u64 v = s.value();
    if (ctx.mul(v, v) == P.eval(s.index())) out.solutions.push_back(s.index());
    if (s.index() == out.range.hi) break;
    s.advance();
  }
  const double len = static_cast<double>(std::max<u64>(out.range.length(), 1));
  out.ratio = static_cast<double>(out.solutions.size()) / std::pow(len, 0.75);

  // Derived congruence for pairs of solutions; all pairs when few, neighbours otherwise.
  const auto& sol = out.solutions;
  const bool all_pairs = sol.size() <= 512;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const u64 n = sol[i];
    u64 prod = 1;
    u64 reached = n;
    const std::size_t last = all_pairs ? sol.size() : std::min(sol.size(), i + 2);
    for (std::size_t j = i + 1; j < last; ++j) {
      const u64 m = sol[j];
      while (reached < m) {
        ++reached;
        const u64 f = ctx.reduce(reached);
        prod = ctx.mul(prod, ctx.mul(f, f));
      }
      const u64 lhs = ctx.mul(P.eval(n), ctx.sub(prod, 1));
      const u64 rhs = ctx.sub(P.eval(m), P.eval(n));
      ++out.pairs_checked;
      if (lhs != rhs) out.derived_congruence_ok = false;
    }
  }
  return out;
}

ColoringReport coloring_pairs(const PrimeCtx& ctx, u64 H, u64 N) {
  const u64 p = ctx.p();
  if (p >= (u64{1} << 32)) throw std::domain_error("coloring_pairs: p must be below 2^32");
  ColoringReport rep;
  rep.p = p;
  rep.range = effective_range(ctx, Window{H, N});
  const u64 lo = rep.range.lo;
  const u64 hi = rep.range.hi;
  const u64 len = rep.range.length();
  rep.degenerate = len < 4;

  // fact[i] = (lo + i)! mod p
  std::vector<u64> fact;
  fact.reserve(rep.range.count());
  for (FactorialStream s(ctx, lo);; s.advance()) {
    fact.push_back(s.value());
    if (s.index() == hi) break;
  }
  {
    std::unordered_set<u64> values(fact.begin(), fact.end());
    rep.colors = values.size();
  }
  auto key = [&](u64 a, u64 b) { return (fact[a - lo] << 32) | fact[b - lo]; };

  std::unordered_map<u64, u64> consecutive;
  std::unordered_map<u64, std::vector<u64>> gap2;
  std::unordered_set<u64> patterns;

  for (u64 n = lo; n + 1 <= hi; ++n) {
    ++rep.consecutive_pairs;
    const u64 k = key(n, n + 1);
    if (!consecutive.emplace(k, n).second) ++rep.consecutive_repeats;
    patterns.insert(k);
  }

  std::vector<u64> wilson_candidates;
  for (u64 n = lo; n + 2 <= hi; ++n) {
    const u64 k = key(n, n + 2);
    auto& seen = gap2[k];
    for (u64 m : seen) {
      ++rep.gap2_coincidences;
      if ((n + m + 3) % p != 0) ++rep.gap2_relation_failures;
      wilson_candidates.push_back(m);
      wilson_candidates.push_back(n);
    }
    seen.push_back(n);
    patterns.insert(k);
  }

  std::sort(wilson_candidates.begin(), wilson_candidates.end());
  wilson_candidates.erase(std::unique(wilson_candidates.begin(), wilson_candidates.end()),
                          wilson_candidates.end());
  for (u64 n : wilson_candidates) {
    const u64 f2 = fact[n + 2 - lo];
    const u64 lhs = ctx.mul(f2, f2);
    u64 rhs = ctx.mul(ctx.reduce(n + 1), ctx.reduce(n + 2));
    if ((n - 1) % 2 == 1) rhs = ctx.neg(rhs);
    ++rep.wilson_checked;
    if (lhs != rhs) ++rep.wilson_failures;
  }

  for (const auto& [k, n] : consecutive) {
    auto it = gap2.find(k);
    if (it == gap2.end()) continue;
    for (u64 m : it->second) {
      ++rep.cross_coincidences;
      const u64 mm = ctx.reduce(m);
      const u64 rhs = ctx.add(ctx.add(ctx.mul(mm, mm), ctx.mul(3, mm)), 1);
      if (ctx.reduce(n) != rhs) ++rep.cross_relation_failures;
    }
  }

  rep.distinct_patterns = patterns.size();
  const double Nd = static_cast<double>(len);
  rep.target = 1.5 * Nd;
  rep.observed_constant =
      len > 0 ? (rep.target - static_cast<double>(rep.distinct_patterns)) / std::pow(Nd, 0.75) : 0.0;
  rep.k_squared_ok = static_cast<u128>(rep.colors) * rep.colors >= rep.distinct_patterns;
  return rep;
}

bool top_factorials_differ(const PrimeCtx& ctx) {
  if (ctx.p() < 5) return true;  // (p-2)! = 1! is outside the stream; 1 != p-1 for p = 3
  FactorialStream s(ctx, ctx.p() - 2);
  const u64 second_last = s.value();
  s.advance();
  return second_last != s.value();
}

}  // namespace factmod
