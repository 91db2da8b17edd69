#include "factmod/modarith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace factmod {

namespace {

u64 mulmod_wide(u64 a, u64 b, u64 m) noexcept {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod_wide(u64 b, u64 e, u64 m) noexcept {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_wide(r, b, m);
    b = mulmod_wide(b, b, m);
    e >>= 1;
  }
  return r;
}

u64 isqrt(u64 n) noexcept {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

constexpr u64 kSegmentBytes = u64{1} << 18;

}  // namespace

bool is_prime_u64(u64 n) noexcept {
  if (n < 2) return false;
  for (u64 q : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Witness set of Jim Sinclair, sufficient for n < 2^64.
  for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
    a %= n;
    if (a == 0) continue;
    u64 x = powmod_wide(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_wide(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeCtx::PrimeCtx(u64 p) : p_(p) {
  if (p < 3 || (p & 1) == 0 || !is_prime_u64(p)) {
    throw std::domain_error("PrimeCtx: " + std::to_string(p) + " is not an odd prime");
  }
  small_ = p < (u64{1} << 32);
  if (small_) barrett_ = std::numeric_limits<u64>::max() / p;
}

u64 PrimeCtx::reduce_signed(i64 x) const noexcept {
  if (x >= 0) return static_cast<u64>(x) % p_;
  // -(x+1) avoids overflow at INT64_MIN.
  const u64 m = (static_cast<u64>(-(x + 1)) % p_ + 1) % p_;
  return m == 0 ? 0 : p_ - m;
}

u64 PrimeCtx::pow(u64 base, u64 exp) const noexcept {
  u64 r = 1;
  base %= p_;
  while (exp) {
    if (exp & 1) r = mul(r, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return r;
}

u64 PrimeCtx::inv(u64 a) const {
  a %= p_;
  if (a == 0) throw std::domain_error("PrimeCtx::inv: zero has no inverse");
  // Extended Euclid on signed 128-bit to stay exact for word-size p.
  __int128 r0 = p_, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const __int128 q = r0 / r1;
    __int128 t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (s0 < 0) s0 += p_;
  return static_cast<u64>(s0);
}

void for_each_prime_segment(u64 lo, u64 hi,
                            const std::function<void(const std::vector<u64>&)>& visit) {
  if (hi < 2 || lo > hi) return;
  lo = std::max<u64>(lo, 2);
  const u64 root = isqrt(hi);

  std::vector<char> small(root + 1, 1);
  std::vector<u64> base;
  for (u64 i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (u64 j = i * i; j <= root; j += i) small[j] = 0;
  }

  std::vector<char> seg(kSegmentBytes);
  std::vector<u64> out;
  for (u64 low = lo; low <= hi;) {
    const u64 high = (hi - low < kSegmentBytes - 1) ? hi : low + kSegmentBytes - 1;
    const u64 len = high - low + 1;
    std::fill(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(len), 1);
    for (u64 q : base) {
      if (q * q > high) break;
      u64 start = std::max(q * q, (low + q - 1) / q * q);
      for (u64 j = start; j <= high; j += q) seg[j - low] = 0;
    }
    out.clear();
    for (u64 i = 0; i < len; ++i) {
      if (seg[i]) out.push_back(low + i);
    }
    if (!out.empty()) visit(out);
    if (high == hi) break;
    low = high + 1;
  }
}

std::vector<u64> primes_in_range(u64 lo, u64 hi) {
  std::vector<u64> primes;
  for_each_prime_segment(lo, hi, [&](const std::vector<u64>& seg) {
    primes.insert(primes.end(), seg.begin(), seg.end());
  });
  return primes;
}

std::vector<u64> sieve_primes(u64 limit) { return primes_in_range(2, limit); }

int jacobi(i64 a, u64 n) noexcept {
  u64 m = n;
  u64 x;
  if (a >= 0) {
    x = static_cast<u64>(a) % m;
  } else {
    const u64 r = (static_cast<u64>(-(a + 1)) % m + 1) % m;
    x = r == 0 ? 0 : m - r;
  }
  int t = 1;
  while (x != 0) {
    while ((x & 1) == 0) {
      x >>= 1;
      const u64 r = m & 7;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(x, m);
    if ((x & 3) == 3 && (m & 3) == 3) t = -t;
    x %= m;
  }
  return m == 1 ? t : 0;
}

int legendre(i64 a, u64 p) {
  if (p <= 2 || (p & 1) == 0 || !is_prime_u64(p)) {
    throw std::domain_error("legendre: modulus " + std::to_string(p) + " is not an odd prime");
  }
  return jacobi(a, p);
}

int legendre(i64 a, const PrimeCtx& ctx) noexcept { return jacobi(a, ctx.p()); }

int legendre_euler(i64 a, const PrimeCtx& ctx) noexcept {
  const u64 r = ctx.reduce_signed(a);
  if (r == 0) return 0;
  return ctx.pow(r, (ctx.p() - 1) / 2) == 1 ? 1 : -1;
}

FactorialStream::FactorialStream(const PrimeCtx& ctx, u64 start) : ctx_(ctx), n_(2), value_(2 % ctx.p()) {
  if (start < 2 || start > ctx.p() - 1) {
    throw std::domain_error("FactorialStream: start " + std::to_string(start) + " outside [2, p-1]");
  }
  while (n_ < start) {
    ++n_;
    value_ = ctx_.mul(value_, n_);
  }
}

FactorialStream FactorialStream::resume(const PrimeCtx& ctx, u64 n, u64 value) {
  if (n < 2 || n > ctx.p() - 1) {
    throw std::domain_error("FactorialStream::resume: index outside [2, p-1]");
  }
  if (value == 0 || value >= ctx.p()) {
    throw std::domain_error("FactorialStream::resume: value is not a nonzero residue");
  }
  return FactorialStream(ctx, n, value);
}

void FactorialStream::advance() {
  if (at_end()) throw std::out_of_range("FactorialStream: already at p-1");
  ++n_;
  value_ = ctx_.mul(value_, n_);
}

}  // namespace factmod
