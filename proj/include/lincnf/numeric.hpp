#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/gmp.hpp>

namespace lincnf {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Closed interval [lo, hi] of exact rationals that is guaranteed to contain a
// real quantity we can only approximate (anything involving e, roots or
// non-integral powers).
struct RationalBracket {
  Rational lo;
  Rational hi;

  bool contains(const Rational &x) const { return lo <= x && x <= hi; }
  double approx() const;
  // Decimal rendering of the midpoint with `digits` significant digits.
  std::string to_string(int digits = 12) const;
};

// Precision, in bits, used for every MPFR evaluation. 256 bits is a little
// over 77 decimal digits.
inline constexpr long kBracketPrecisionBits = 256;

// e bracketed by directed rounding at kBracketPrecisionBits.
RationalBracket euler_bracket();

// Bracket for x^(num/den) with x > 0 rational.
RationalBracket pow_bracket(const Rational &x, const Rational &exponent);

RationalBracket operator*(const RationalBracket &a, const RationalBracket &b);
RationalBracket operator/(const RationalBracket &a, const RationalBracket &b);
RationalBracket operator+(const RationalBracket &a, const Rational &b);
RationalBracket exact(const Rational &x);

BigInt pow2(std::uint64_t exponent);
BigInt binomial(std::uint64_t n, std::uint64_t k);

// Number of bits of |x| (0 for x == 0).
std::uint64_t bit_length(const BigInt &x);

BigInt floor_rational(const Rational &x);
BigInt ceil_rational(const Rational &x);

// Decimal string of a rational, rounded to `digits` significant digits.
std::string to_decimal(const Rational &x, int digits = 12);

} // namespace lincnf
