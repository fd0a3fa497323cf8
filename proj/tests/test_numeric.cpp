#include <doctest.h>

#include "lincnf/numeric.hpp"

using namespace lincnf;

TEST_SUITE("numeric") {

TEST_CASE("e bracket is tight and correct") {
  const RationalBracket e = euler_bracket();
  // 2.71828182845904523536028747135266249775724709369995...
  const Rational below("271828182845904523536028747135266249775724709369995/"
                       "100000000000000000000000000000000000000000000000000");
  const Rational above("271828182845904523536028747135266249775724709369996/"
                       "100000000000000000000000000000000000000000000000000");
  CHECK(e.lo < e.hi);
  CHECK(e.lo > below);
  CHECK(e.hi < above);
}

TEST_CASE("pow bracket contains the real power") {
  const RationalBracket r = pow_bracket(2, Rational(1, 2));
  CHECK(r.lo * r.lo <= 2);
  CHECK(r.hi * r.hi >= 2);
  CHECK(r.hi - r.lo < Rational(1, BigInt(1) << 150));

  const RationalBracket c = pow_bracket(Rational(27, 8), Rational(1, 3));
  CHECK(c.contains(Rational(3, 2)));

  const RationalBracket big = pow_bracket(10, 40);
  CHECK(big.contains(Rational(boost::multiprecision::pow(BigInt(10), 40))));
}

TEST_CASE("bracket arithmetic stays outward") {
  const RationalBracket e = euler_bracket();
  const RationalBracket q = exact(1) / e;
  CHECK(q.lo * e.hi <= 1);
  CHECK(q.hi * e.lo >= 1);
  const RationalBracket s = e + Rational(-2);
  CHECK(s.lo == e.lo - 2);
  CHECK(e.approx() == doctest::Approx(2.718281828459045).epsilon(1e-15));
}

TEST_CASE("integer helpers") {
  CHECK(pow2(0) == 1);
  CHECK(pow2(70) == BigInt("1180591620717411303424"));
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(3, 5) == 0);
  CHECK(bit_length(0) == 0);
  CHECK(bit_length(255) == 8);
  CHECK(bit_length(256) == 9);
  CHECK(floor_rational(Rational(-7, 2)) == -4);
  CHECK(ceil_rational(Rational(-7, 2)) == -3);
  CHECK(floor_rational(Rational(7, 2)) == 3);
  CHECK(ceil_rational(Rational(6, 2)) == 3);
}

TEST_CASE("decimal rendering") {
  CHECK(to_decimal(Rational(1, 3), 5) == "0.33333");
  CHECK(to_decimal(Rational(102400), 12) == "102400");
}

}
