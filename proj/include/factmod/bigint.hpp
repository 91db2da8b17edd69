#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace factmod {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Decimal rendering of a rational with `digits` places after the point (truncated toward zero).
std::string to_decimal(const Rational& q, int digits = 12);

/// "num/den" in lowest terms ("n" when the denominator is 1).
std::string to_fraction(const Rational& q);

}  // namespace factmod
