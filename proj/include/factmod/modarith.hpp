#pragma once

// Word-size modular arithmetic over an odd prime, prime enumeration,
// quadratic characters and the factorial sequence n! (mod p).

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace factmod {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/// Deterministic Miller-Rabin, valid for every 64-bit n.
bool is_prime_u64(u64 n) noexcept;

/// An odd prime together with the constants needed for fast reduction.
///
/// Moduli below 2^32 use a Barrett reduction of the 64-bit product; larger
/// moduli fall back to a 128-bit remainder. Both agree bit-for-bit with
/// (a*b) mod p.
class PrimeCtx {
 public:
  /// Throws std::domain_error unless p is an odd prime.
  explicit PrimeCtx(u64 p);

  u64 p() const noexcept { return p_; }

  u64 mul(u64 a, u64 b) const noexcept {
    if (small_) {
      const u64 x = a * b;
      const u64 q = static_cast<u64>((static_cast<u128>(x) * barrett_) >> 64);
      u64 r = x - q * p_;
      if (r >= p_) r -= p_;
      if (r >= p_) r -= p_;
      return r;
    }
    return static_cast<u64>(static_cast<u128>(a) * b % p_);
  }

  u64 add(u64 a, u64 b) const noexcept {
    const u64 s = a + b;
    return (s >= p_ || s < a) ? s - p_ : s;
  }
  u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + (p_ - b); }
  u64 neg(u64 a) const noexcept { return a == 0 ? 0 : p_ - a; }

  /// Reduces an arbitrary word.
  u64 reduce(u64 x) const noexcept { return x % p_; }
  /// Reduces a signed value to its least nonnegative residue.
  u64 reduce_signed(i64 x) const noexcept;

  u64 pow(u64 base, u64 exp) const noexcept;
  /// Throws std::domain_error for a == 0.
  u64 inv(u64 a) const;

  friend bool operator==(const PrimeCtx& a, const PrimeCtx& b) noexcept { return a.p_ == b.p_; }

 private:
  u64 p_;
  u64 barrett_ = 0;
  bool small_ = false;
};

inline u64 mul_mod(u64 a, u64 b, const PrimeCtx& ctx) noexcept { return ctx.mul(a, b); }

/// All primes in [2, limit], ascending. Segmented, O(sqrt(limit) + segment) memory
/// beyond the output itself.
std::vector<u64> sieve_primes(u64 limit);

/// All primes in [lo, hi], ascending.
std::vector<u64> primes_in_range(u64 lo, u64 hi);

/// Visits the primes of [lo, hi] in ascending order one segment at a time.
void for_each_prime_segment(u64 lo, u64 hi,
                            const std::function<void(const std::vector<u64>&)>& visit);

/// Jacobi symbol (a/n) for odd n >= 1, via quadratic reciprocity.
int jacobi(i64 a, u64 n) noexcept;

/// Legendre symbol via reciprocity. Throws std::domain_error unless p is an odd prime.
int legendre(i64 a, u64 p);
/// Legendre symbol via reciprocity, prime already validated by ctx.
int legendre(i64 a, const PrimeCtx& ctx) noexcept;
/// Legendre symbol via Euler's criterion a^((p-1)/2).
int legendre_euler(i64 a, const PrimeCtx& ctx) noexcept;

/// Running product n! mod p over 2 <= n <= p-1.
class FactorialStream {
 public:
  /// Positions the stream at n = start. Throws std::domain_error unless 2 <= start <= p-1.
  FactorialStream(const PrimeCtx& ctx, u64 start);

  /// Resumes from a checkpoint (n, n! mod p). The value is trusted, not recomputed.
  static FactorialStream resume(const PrimeCtx& ctx, u64 n, u64 value);

  u64 index() const noexcept { return n_; }
  u64 value() const noexcept { return value_; }
  bool at_end() const noexcept { return n_ + 1 >= ctx_.p(); }
  const PrimeCtx& ctx() const noexcept { return ctx_; }

  /// Moves to n+1. Throws std::out_of_range when already at p-1.
  void advance();

  std::pair<u64, u64> checkpoint() const noexcept { return {n_, value_}; }

 private:
  FactorialStream(const PrimeCtx& ctx, u64 n, u64 value) : ctx_(ctx), n_(n), value_(value) {}

  PrimeCtx ctx_;
  u64 n_;
  u64 value_;
};

}  // namespace factmod
