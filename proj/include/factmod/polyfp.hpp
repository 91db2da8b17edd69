#pragma once

// Dense polynomials over F_p, ascending-degree storage.

#include <string>
#include <string_view>
#include <vector>

#include "factmod/modarith.hpp"

namespace factmod {

class PolyFp {
 public:
  /// The zero polynomial.
  explicit PolyFp(const PrimeCtx& ctx) : ctx_(ctx) {}
  /// Coefficients are reduced mod p and trailing zeros dropped.
  PolyFp(const PrimeCtx& ctx, std::vector<u64> coeffs);

  static PolyFp from_signed(const PrimeCtx& ctx, const std::vector<i64>& coeffs);
  static PolyFp constant(const PrimeCtx& ctx, u64 c);
  /// The monomial x.
  static PolyFp x(const PrimeCtx& ctx);

  const PrimeCtx& ctx() const noexcept { return ctx_; }
  const std::vector<u64>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  u64 lead() const noexcept { return c_.empty() ? 0 : c_.back(); }
  u64 operator[](std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }

  u64 eval(u64 t) const noexcept;
  PolyFp monic() const;
  PolyFp derivative() const;

  friend bool operator==(const PolyFp& a, const PolyFp& b) noexcept {
    return a.ctx_ == b.ctx_ && a.c_ == b.c_;
  }

 private:
  void trim() noexcept;

  PrimeCtx ctx_;
  std::vector<u64> c_;
};

/// Throws std::domain_error when the two operands live over different primes.
PolyFp poly_add(const PolyFp& f, const PolyFp& g);
PolyFp poly_sub(const PolyFp& f, const PolyFp& g);
PolyFp poly_mul(const PolyFp& f, const PolyFp& g);

struct PolyDivMod {
  PolyFp quot;
  PolyFp rem;
};
/// Throws std::domain_error for g == 0.
PolyDivMod poly_divmod(const PolyFp& f, const PolyFp& g);
PolyFp poly_rem(const PolyFp& f, const PolyFp& g);

/// Monic gcd; gcd(0, 0) = 0.
PolyFp poly_gcd(const PolyFp& f, const PolyFp& g);

/// x^p mod f by square-and-multiply. Throws std::domain_error when deg f < 1.
PolyFp poly_powmod_xp(const PolyFp& f);

/// Number of distinct roots of f in F_p: deg gcd(x^p - x mod f, f).
/// Throws std::domain_error for f == 0.
int distinct_root_count(const PolyFp& f);

inline constexpr u64 kBruteRootGuard = 1'000'000;

/// All roots in [0, p-1], ascending, by Horner evaluation.
/// Throws std::domain_error when p exceeds `guard` or f == 0.
std::vector<u64> roots_brute(const PolyFp& f, u64 guard = kBruteRootGuard);

/// Sylvester-matrix resultant over F_p. Throws std::domain_error for a zero input.
u64 resultant_fp(const PolyFp& f, const PolyFp& g);
/// (-1)^{d(d-1)/2} Res(f, f') / lead(f). Throws std::domain_error when deg f < 1.
u64 discriminant_fp(const PolyFp& f);

/// Parses "c0,c1,...,cd" (decimal, optional leading '-') and reduces mod p.
PolyFp parse_poly_fp(const PrimeCtx& ctx, std::string_view text);
std::string to_string(const PolyFp& f);

}  // namespace factmod
