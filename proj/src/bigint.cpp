#include "factmod/bigint.hpp"

namespace factmod {

std::string to_decimal(const Rational& q, int digits) {
  using boost::multiprecision::abs;
  BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  const bool negative = num < 0;
  num = abs(num);
  BigInt whole = num / den;
  BigInt rem = num % den;
  std::string out = negative ? "-" : "";
  out += whole.str();
  if (digits > 0) {
    out += '.';
    for (int i = 0; i < digits; ++i) {
      rem *= 10;
      const BigInt d = rem / den;
      rem %= den;
      out += static_cast<char>('0' + d.convert_to<int>());
    }
  }
  return out;
}

std::string to_fraction(const Rational& q) {
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" + den.str();
}

}  // namespace factmod
