#include "lincnf/numeric.hpp"

#include <algorithm>
#include <stdexcept>

#include <mpfr.h>

namespace lincnf {

namespace {

// RAII holder for an mpfr_t at the bracket precision.
class Mpfr {
public:
  Mpfr() { mpfr_init2(v_, kBracketPrecisionBits); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr &) = delete;
  Mpfr &operator=(const Mpfr &) = delete;

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  Rational to_rational() const {
    Rational r;
    mpfr_get_q(r.backend().data(), v_);
    return r;
  }

private:
  mpfr_t v_;
};

void set_rational(Mpfr &dst, const Rational &x, mpfr_rnd_t rnd) {
  mpfr_set_q(dst.get(), x.backend().data(), rnd);
}

} // namespace

double RationalBracket::approx() const {
  Rational mid = (lo + hi) / 2;
  return mid.convert_to<double>();
}

std::string RationalBracket::to_string(int digits) const {
  return to_decimal((lo + hi) / 2, digits);
}

RationalBracket euler_bracket() {
  Mpfr one, lo, hi;
  mpfr_set_ui(one.get(), 1, MPFR_RNDN);
  mpfr_exp(lo.get(), one.get(), MPFR_RNDD);
  mpfr_exp(hi.get(), one.get(), MPFR_RNDU);
  return {lo.to_rational(), hi.to_rational()};
}

RationalBracket pow_bracket(const Rational &x, const Rational &exponent) {
  if (x <= 0)
    throw std::domain_error("pow_bracket: base must be positive");
  // mpfr_pow is correctly rounded; the only other error is the conversion of
  // the two rational inputs, which perturbs the result by a relative amount
  // of roughly |exponent * ln x| * 2^-256. A relative pad of 2^-200 covers
  // that for every magnitude this library evaluates.
  Mpfr base, e, out;
  set_rational(base, x, MPFR_RNDN);
  set_rational(e, exponent, MPFR_RNDN);
  mpfr_pow(out.get(), base.get(), e.get(), MPFR_RNDN);
  Rational v = out.to_rational();
  Rational pad = v / Rational(pow2(200));
  return {v - pad, v + pad};
}

RationalBracket operator*(const RationalBracket &a, const RationalBracket &b) {
  Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

RationalBracket operator/(const RationalBracket &a, const RationalBracket &b) {
  if (b.lo <= 0 && b.hi >= 0)
    throw std::domain_error("bracket division by interval containing zero");
  RationalBracket inv{1 / b.hi, 1 / b.lo};
  return a * inv;
}

RationalBracket operator+(const RationalBracket &a, const Rational &b) {
  return {a.lo + b, a.hi + b};
}

RationalBracket exact(const Rational &x) { return {x, x}; }

BigInt pow2(std::uint64_t exponent) {
  BigInt r = 1;
  r <<= exponent;
  return r;
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n)
    return 0;
  BigInt r;
  mpz_bin_uiui(r.backend().data(), n, k);
  return r;
}

std::uint64_t bit_length(const BigInt &x) {
  if (x == 0)
    return 0;
  return mpz_sizeinbase(x.backend().data(), 2);
}

BigInt floor_rational(const Rational &x) {
  BigInt q;
  mpz_fdiv_q(q.backend().data(), numerator(x).backend().data(),
             denominator(x).backend().data());
  return q;
}

BigInt ceil_rational(const Rational &x) {
  BigInt q;
  mpz_cdiv_q(q.backend().data(), numerator(x).backend().data(),
             denominator(x).backend().data());
  return q;
}

std::string to_decimal(const Rational &x, int digits) {
  Mpfr v;
  set_rational(v, x, MPFR_RNDN);
  char *buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, v.get());
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

} // namespace lincnf
