#include <doctest.h>

#include <random>

#include "lincnf/error.hpp"
#include "lincnf/galois.hpp"

using namespace lincnf;

namespace {

bool trial_division_prime(std::uint64_t n) {
  if (n < 2)
    return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

bool trial_division_prime_power(std::uint64_t q) {
  if (q < 2)
    return false;
  std::uint64_t p = 2;
  while (q % p)
    ++p;
  while (q % p == 0)
    q /= p;
  return q == 1;
}

// Schoolbook product of coefficient vectors reduced by a monic modulus.
std::vector<std::uint32_t> poly_mulmod(const std::vector<std::uint32_t> &a,
                                       const std::vector<std::uint32_t> &b,
                                       const std::vector<std::uint32_t> &mod, std::uint32_t p) {
  std::vector<std::uint64_t> prod(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  const std::size_t e = mod.size() - 1;
  for (std::size_t i = prod.size(); i-- > e;) {
    const std::uint64_t c = prod[i];
    if (!c)
      continue;
    for (std::size_t j = 0; j <= e; ++j)
      prod[i - e + j] = (prod[i - e + j] + (p - c) * mod[j]) % p;
  }
  std::vector<std::uint32_t> out(e, 0);
  for (std::size_t i = 0; i < e; ++i)
    out[i] = static_cast<std::uint32_t>(prod[i]);
  return out;
}

} // namespace

TEST_SUITE("galois") {

TEST_CASE("GF(8) uses x^3 + x + 1") {
  FieldPtr f = field_make(8);
  CHECK(f->characteristic() == 2);
  CHECK(f->degree() == 3);
  CHECK(f->modulus() == std::vector<std::uint32_t>{1, 1, 0, 1});
  CHECK(f->modulus_string() == "x^3 + x + 1");
  const FieldElement x(f, 2), x2(f, 4);
  CHECK((x * x) == x2);
  CHECK((x * x2).code() == 3); // x^3 = x + 1
  CHECK(x.pow(7) == FieldElement::one(f));
}

TEST_CASE("prime field inverses") {
  FieldPtr f = field_make(5);
  CHECK(FieldElement(f, 2).inv().code() == 3);
  CHECK((FieldElement(f, 3) / FieldElement(f, 4)).code() == 2);
  CHECK_THROWS_AS(FieldElement::zero(f).inv(), InvalidArgument);
  CHECK_THROWS_AS(FieldElement(f, 5), InvalidArgument);
  CHECK_THROWS_AS(FieldElement(f, 1) + FieldElement(field_make(7), 1), InvalidArgument);
}

TEST_CASE("field operations match polynomial arithmetic") {
  for (std::uint64_t q : {2u, 3u, 4u, 7u, 8u, 9u, 16u, 25u, 27u}) {
    FieldPtr f = field_make(q);
    const auto &mod = f->modulus();
    const std::uint32_t p = f->characteristic();
    CHECK(is_irreducible(p, mod));
    for (std::uint32_t a = 0; a < q; ++a) {
      const FieldElement ea(f, a);
      if (a)
        CHECK((ea * ea.inv()).code() == 1);
      for (std::uint32_t b = 0; b < q; ++b) {
        const FieldElement eb(f, b);
        const auto ca = f->coefficients(a), cb = f->coefficients(b);
        std::vector<std::uint32_t> sum(ca.size());
        for (std::size_t i = 0; i < ca.size(); ++i)
          sum[i] = (ca[i] + cb[i]) % p;
        CHECK((ea + eb).coefficients() == sum);
        CHECK((ea * eb).coefficients() == poly_mulmod(ca, cb, mod, p));
        CHECK(((ea - eb) + eb) == ea);
      }
    }
  }
}

TEST_CASE("irreducibility") {
  CHECK_FALSE(is_irreducible(2, {1, 0, 1}));  // (x+1)^2
  CHECK(is_irreducible(2, {1, 1, 1}));
  CHECK(is_irreducible(3, {1, 0, 1}));
  CHECK_FALSE(is_irreducible(5, {1, 0, 1}));  // 2^2 = -1 mod 5
  CHECK(is_irreducible(2, {1, 1, 0, 0, 1})); // x^4 + x + 1
  CHECK_THROWS_AS(FieldSpec(2, {1, 0, 1}), InvalidArgument);
  CHECK_THROWS_AS(FieldSpec(4, {1, 1}), InvalidArgument);
}

TEST_CASE("prime powers and primality") {
  CHECK_FALSE(prime_power(1));
  CHECK_FALSE(prime_power(12));
  CHECK(prime_power(49)->p == 7);
  CHECK(prime_power(49)->e == 2);
  CHECK(prime_power(1024)->e == 10);
  for (std::uint64_t n = 0; n < 5000; ++n) {
    CHECK(is_prime(n) == trial_division_prime(n));
    CHECK(prime_power(n).has_value() == trial_division_prime_power(n));
  }
  CHECK(is_prime((std::uint64_t{1} << 61) - 1));
  CHECK_FALSE(is_prime(((std::uint64_t{1} << 61) - 1) * 3));
  CHECK_THROWS_AS(field_make(6), InvalidArgument);
}

TEST_CASE("choose_q picks the smallest admissible prime power") {
  CHECK(choose_q(2, 1) == 8);
  CHECK(choose_q(3, 1) == 25);
  CHECK(choose_q(4, 1) == 64);
  CHECK(choose_q(5, 1) == 163);
  CHECK(choose_q(5, 2) == 13);
  CHECK(choose_q(2, 3) == 2);
  for (int k = 2; k <= 12; ++k)
    for (int b = 1; b <= 3; ++b) {
      const std::uint64_t target = static_cast<std::uint64_t>(k) << k;
      std::uint64_t q = 2;
      for (;; ++q) {
        std::uint64_t pw = 1;
        for (int i = 0; i < b; ++i)
          pw *= q;
        if (pw >= target && trial_division_prime_power(q))
          break;
      }
      CHECK(choose_q(k, b) == q);
    }
  CHECK_THROWS_AS(choose_q(60, 1), CapExceeded);
}

TEST_CASE("gaussian elimination") {
  FieldPtr f = field_make(9);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    FieldMatrix a(n);
    std::vector<FieldElement> x;
    for (int i = 0; i < n; ++i) {
      x.emplace_back(f, static_cast<std::uint32_t>(rng() % 9));
      for (int j = 0; j < n; ++j)
        a[i].emplace_back(f, static_cast<std::uint32_t>(rng() % 9));
    }
    std::vector<FieldElement> rhs;
    for (int i = 0; i < n; ++i) {
      FieldElement acc = FieldElement::zero(f);
      for (int j = 0; j < n; ++j)
        acc = acc + a[i][j] * x[j];
      rhs.push_back(acc);
    }
    auto sol = gaussian_solve(a, rhs);
    if (sol) {
      for (int i = 0; i < n; ++i) {
        FieldElement acc = FieldElement::zero(f);
        for (int j = 0; j < n; ++j)
          acc = acc + a[i][j] * (*sol)[j];
        CHECK(acc == rhs[i]);
      }
    }
  }
  FieldMatrix singular{{FieldElement(f, 1), FieldElement(f, 2)},
                       {FieldElement(f, 1), FieldElement(f, 2)}};
  CHECK_FALSE(gaussian_solve(singular, {FieldElement(f, 0), FieldElement(f, 1)}));
  CHECK_THROWS_AS(gaussian_solve(singular, {FieldElement(f, 0)}), InvalidArgument);

  std::vector<FieldElement> pts{FieldElement(f, 0), FieldElement(f, 1), FieldElement(f, 5)};
  CHECK(gaussian_solve(vandermonde(pts), {FieldElement(f, 1), FieldElement(f, 0),
                                          FieldElement(f, 0)}));
}

}
