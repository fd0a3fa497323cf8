#include "lincnf/galois.hpp"

#include <cmath>
#include <sstream>

#include "lincnf/error.hpp"

namespace lincnf {

namespace {

using Poly = std::vector<std::uint32_t>; // low degree first

void trim(Poly &a) {
  while (!a.empty() && a.back() == 0)
    a.pop_back();
}

// Remainder of a modulo monic d over GF(p).
Poly poly_mod(Poly a, const Poly &d, std::uint32_t p) {
  trim(a);
  const std::size_t dd = d.size() - 1;
  while (a.size() > dd) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - 1 - dd;
    for (std::size_t i = 0; i <= dd; ++i) {
      std::uint64_t sub = lead * d[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1)
      r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// a^e, or nullopt on overflow past 2^63.
std::optional<std::uint64_t> checked_pow(std::uint64_t a, std::uint32_t e) {
  unsigned __int128 r = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    r *= a;
    if (r > (static_cast<unsigned __int128>(1) << 63))
      return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

// Smallest r with r^e >= n.
std::uint64_t iroot_ceil(std::uint64_t n, std::uint32_t e) {
  if (n <= 1)
    return n;
  auto guess = static_cast<std::uint64_t>(std::pow(static_cast<long double>(n),
                                                   1.0L / e));
  std::uint64_t r = guess > 2 ? guess - 2 : 1;
  for (;;) {
    auto v = checked_pow(r, e);
    if (!v || *v >= n)
      return r;
    ++r;
  }
}

} // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2)
    return false;
  for (std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0)
      return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These witnesses are deterministic for all 64-bit n.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1)
      continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite)
      return false;
  }
  return true;
}

std::optional<PrimePower> prime_power(std::uint64_t q) {
  if (q < 2)
    return std::nullopt;
  for (std::uint32_t e = 1; e < 64; ++e) {
    std::uint64_t r = iroot_ceil(q, e);
    if (r < 2)
      break;
    auto v = checked_pow(r, e);
    if (v && *v == q && is_prime(r))
      return PrimePower{r, e};
  }
  return std::nullopt;
}

bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t> &poly) {
  Poly f = poly;
  trim(f);
  if (f.size() < 2)
    return false;
  const std::size_t deg = f.size() - 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i)
      count *= p;
    for (std::uint64_t c = 0; c < count; ++c) {
      Poly divisor(d + 1);
      std::uint64_t rest = c;
      for (std::size_t i = 0; i < d; ++i) {
        divisor[i] = static_cast<std::uint32_t>(rest % p);
        rest /= p;
      }
      divisor[d] = 1;
      if (poly_mod(f, divisor, p).empty())
        return false;
    }
  }
  return true;
}

FieldSpec::FieldSpec(std::uint32_t p, std::vector<std::uint32_t> modulus)
    : p_(p), modulus_(std::move(modulus)) {
  if (!is_prime(p))
    throw InvalidArgument("field characteristic " + std::to_string(p) +
                          " is not prime");
  if (modulus_.size() < 2 || modulus_.back() != 1)
    throw InvalidArgument("field modulus must be monic of degree >= 1");
  for (auto c : modulus_)
    if (c >= p)
      throw InvalidArgument("modulus coefficient out of range");
  if (!is_irreducible(p, modulus_))
    throw InvalidArgument("field modulus is reducible");
  e_ = static_cast<std::uint32_t>(modulus_.size() - 1);
  auto q = checked_pow(p, e_);
  if (!q || *q > (1ULL << 31))
    throw CapExceeded("field order exceeds 2^31");
  q_ = static_cast<std::uint32_t>(*q);
}

std::string FieldSpec::modulus_string() const {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = modulus_.size(); i-- > 0;) {
    const auto c = modulus_[i];
    if (c == 0)
      continue;
    if (!first)
      out << " + ";
    first = false;
    if (i == 0 || c != 1)
      out << c;
    if (i >= 1)
      out << "x";
    if (i >= 2)
      out << "^" << i;
  }
  return out.str();
}

std::vector<std::uint32_t> FieldSpec::coefficients(std::uint32_t code) const {
  std::vector<std::uint32_t> c(e_);
  for (std::uint32_t i = 0; i < e_; ++i) {
    c[i] = code % p_;
    code /= p_;
  }
  return c;
}

std::uint32_t FieldSpec::code(const std::vector<std::uint32_t> &coefficients) const {
  std::uint32_t code = 0;
  for (std::size_t i = coefficients.size(); i-- > 0;)
    code = code * p_ + coefficients[i];
  return code;
}

std::uint32_t FieldSpec::add(std::uint32_t a, std::uint32_t b) const {
  if (e_ == 1)
    return (a + b) % p_;
  auto x = coefficients(a), y = coefficients(b);
  for (std::uint32_t i = 0; i < e_; ++i)
    x[i] = (x[i] + y[i]) % p_;
  return code(x);
}

std::uint32_t FieldSpec::neg(std::uint32_t a) const {
  auto x = coefficients(a);
  for (auto &c : x)
    c = (p_ - c) % p_;
  return code(x);
}

std::uint32_t FieldSpec::mul(std::uint32_t a, std::uint32_t b) const {
  if (e_ == 1)
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
  auto x = coefficients(a), y = coefficients(b);
  Poly prod(2 * e_ - 1, 0);
  for (std::uint32_t i = 0; i < e_; ++i)
    for (std::uint32_t j = 0; j < e_; ++j)
      prod[i + j] = static_cast<std::uint32_t>(
          (prod[i + j] + static_cast<std::uint64_t>(x[i]) * y[j]) % p_);
  Poly r = poly_mod(std::move(prod), modulus_, p_);
  r.resize(e_, 0);
  return code(r);
}

FieldPtr field_make(std::uint64_t q) {
  auto pp = prime_power(q);
  if (!pp)
    throw InvalidArgument(std::to_string(q) + " is not a prime power");
  const auto p = static_cast<std::uint32_t>(pp->p);
  const std::uint32_t e = pp->e;
  // Lower coefficients enumerated by base-p code, i.e. compared from the
  // highest coefficient down: x^3 + x + 1 precedes x^3 + x^2 + 1.
  for (std::uint64_t c = 0; c < q; ++c) {
    Poly modulus(e + 1);
    std::uint64_t rest = c;
    for (std::uint32_t i = 0; i < e; ++i) {
      modulus[i] = static_cast<std::uint32_t>(rest % p);
      rest /= p;
    }
    modulus[e] = 1;
    if (is_irreducible(p, modulus))
      return std::make_shared<const FieldSpec>(p, std::move(modulus));
  }
  throw Error("no irreducible polynomial found for q = " + std::to_string(q));
}

// --- FieldElement --------------------------------------------------------------

FieldElement::FieldElement(FieldPtr field, std::uint32_t code)
    : field_(std::move(field)), code_(code) {
  if (!field_)
    throw InvalidArgument("field element without a field");
  if (code_ >= field_->order())
    throw InvalidArgument("field element code out of range");
}

void FieldElement::same_field(const FieldElement &o) const {
  if (field_ != o.field_ && !(*field_ == *o.field_))
    throw InvalidArgument("arithmetic between elements of different fields");
}

FieldElement FieldElement::operator+(const FieldElement &o) const {
  same_field(o);
  return {field_, field_->add(code_, o.code_)};
}

FieldElement FieldElement::operator-(const FieldElement &o) const {
  same_field(o);
  return {field_, field_->add(code_, field_->neg(o.code_))};
}

FieldElement FieldElement::operator-() const { return {field_, field_->neg(code_)}; }

FieldElement FieldElement::operator*(const FieldElement &o) const {
  same_field(o);
  return {field_, field_->mul(code_, o.code_)};
}

FieldElement FieldElement::operator/(const FieldElement &o) const {
  same_field(o);
  return *this * o.inv();
}

FieldElement FieldElement::inv() const {
  if (is_zero())
    throw InvalidArgument("zero has no multiplicative inverse");
  return pow(field_->order() - 2);
}

FieldElement FieldElement::pow(std::uint64_t exponent) const {
  FieldElement result = one(field_);
  FieldElement base = *this;
  while (exponent) {
    if (exponent & 1)
      result = result * base;
    base = base * base;
    exponent >>= 1;
  }
  return result;
}

bool FieldElement::operator==(const FieldElement &o) const {
  same_field(o);
  return code_ == o.code_;
}

// --- linear algebra ---------------------------------------------------------------

std::optional<std::vector<FieldElement>>
gaussian_solve(const FieldMatrix &matrix, const std::vector<FieldElement> &rhs) {
  const std::size_t n = matrix.size();
  if (rhs.size() != n)
    throw InvalidArgument("right-hand side length does not match matrix");
  for (const auto &row : matrix)
    if (row.size() != n)
      throw InvalidArgument("matrix is not square");
  if (n == 0)
    return std::vector<FieldElement>{};

  FieldMatrix a = matrix;
  std::vector<FieldElement> b = rhs;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero())
      ++pivot;
    if (pivot == n)
      return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    const FieldElement scale = a[col][col].inv();
    for (std::size_t c = col; c < n; ++c)
      a[col][c] = a[col][c] * scale;
    b[col] = b[col] * scale;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero())
        continue;
      const FieldElement factor = a[r][col];
      for (std::size_t c = col; c < n; ++c)
        a[r][c] = a[r][c] - factor * a[col][c];
      b[r] = b[r] - factor * b[col];
    }
  }
  return b;
}

FieldMatrix vandermonde(const std::vector<FieldElement> &points) {
  FieldMatrix m;
  const std::size_t n = points.size();
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<FieldElement> row;
    row.reserve(n);
    for (const auto &x : points)
      row.push_back(x.pow(r));
    m.push_back(std::move(row));
  }
  return m;
}

std::uint64_t choose_q(int k, int b) {
  if (k < 1 || b < 1)
    throw InvalidArgument("choose_q needs k >= 1 and b >= 1");
  if (k > 56)
    throw CapExceeded("k * 2^k does not fit in 62 bits for k = " + std::to_string(k));
  const std::uint64_t target = static_cast<std::uint64_t>(k) << k;
  std::uint64_t q = iroot_ceil(target, static_cast<std::uint32_t>(b));
  while (!prime_power(q))
    ++q;
  return q;
}

} // namespace lincnf
