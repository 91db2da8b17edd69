#pragma once

// Dense polynomials with arbitrary-precision integer coefficients, exact
// resultants and discriminants.

#include <string>
#include <string_view>
#include <vector>

#include "factmod/bigint.hpp"
#include "factmod/polyfp.hpp"

namespace factmod {

class PolyZ {
 public:
  PolyZ() = default;
  explicit PolyZ(std::vector<BigInt> coeffs);

  const std::vector<BigInt>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const BigInt& lead() const;
  BigInt operator[](std::size_t i) const { return i < c_.size() ? c_[i] : BigInt(0); }

  BigInt eval(const BigInt& t) const;
  PolyZ derivative() const;
  /// Coefficient-wise reduction mod p.
  PolyFp reduce(const PrimeCtx& ctx) const;

  friend bool operator==(const PolyZ&, const PolyZ&) = default;

 private:
  std::vector<BigInt> c_;
};

PolyZ poly_mul(const PolyZ& f, const PolyZ& g);

/// Res(f, g) through the subresultant remainder sequence, normalised to the
/// Sylvester determinant with the rows of f first. Throws std::domain_error for a zero input.
BigInt resultant_z(const PolyZ& f, const PolyZ& g);

/// Sylvester determinant by fraction-free (Bareiss) elimination. Independent
/// of resultant_z; intended for small degrees.
BigInt sylvester_resultant(const PolyZ& f, const PolyZ& g);

/// (-1)^{d(d-1)/2} Res(f, f') / lead(f); 1 for linear f. Throws std::domain_error for deg f < 1.
BigInt discriminant_z(const PolyZ& f);

PolyZ parse_poly_z(std::string_view text);
std::string to_string(const PolyZ& f);

/// Least nonnegative residue of a big integer.
u64 reduce_big(const BigInt& v, const PrimeCtx& ctx);

}  // namespace factmod
