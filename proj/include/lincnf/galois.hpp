#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lincnf {

// GF(p^e) described by a monic irreducible modulus over GF(p). Coefficient
// vectors are stored low degree first.
class FieldSpec {
public:
  // Verifies that p is prime and the modulus is monic, of degree e and
  // irreducible; throws InvalidArgument otherwise.
  FieldSpec(std::uint32_t p, std::vector<std::uint32_t> modulus);

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return e_; }
  std::uint32_t order() const { return q_; }
  const std::vector<std::uint32_t> &modulus() const { return modulus_; }

  // "x^3 + x + 1" style rendering of the modulus.
  std::string modulus_string() const;

  // Element codes are base-p integers over the coefficient vector; code order
  // is the canonical enumeration of the field.
  std::vector<std::uint32_t> coefficients(std::uint32_t code) const;
  std::uint32_t code(const std::vector<std::uint32_t> &coefficients) const;

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;

  bool operator==(const FieldSpec &) const = default;

private:
  std::uint32_t p_;
  std::uint32_t e_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
};

using FieldPtr = std::shared_ptr<const FieldSpec>;

// Builds GF(q) with the lexicographically smallest monic irreducible modulus
// (smallest base-p code of its lower coefficients). Throws InvalidArgument if
// q is not a prime power.
FieldPtr field_make(std::uint64_t q);

// Irreducibility by trial division against every monic polynomial of degree
// 1..deg/2 over GF(p).
bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t> &poly);

// An element bound to its field. Mixing fields throws InvalidArgument.
class FieldElement {
public:
  FieldElement(FieldPtr field, std::uint32_t code);

  static FieldElement zero(FieldPtr field) { return {std::move(field), 0}; }
  static FieldElement one(FieldPtr field) { return {std::move(field), 1}; }

  const FieldPtr &field() const { return field_; }
  std::uint32_t code() const { return code_; }
  std::vector<std::uint32_t> coefficients() const { return field_->coefficients(code_); }
  bool is_zero() const { return code_ == 0; }

  FieldElement operator+(const FieldElement &o) const;
  FieldElement operator-(const FieldElement &o) const;
  FieldElement operator-() const;
  FieldElement operator*(const FieldElement &o) const;
  FieldElement operator/(const FieldElement &o) const;

  // Throws InvalidArgument for zero.
  FieldElement inv() const;
  FieldElement pow(std::uint64_t exponent) const;

  bool operator==(const FieldElement &o) const;

private:
  void same_field(const FieldElement &o) const;
  FieldPtr field_;
  std::uint32_t code_;
};

using FieldMatrix = std::vector<std::vector<FieldElement>>;

// Exact solve of a square system by Gaussian elimination with leftmost-nonzero
// pivoting. Returns nullopt when the matrix is singular; throws
// InvalidArgument on shape mismatch or an empty system without a field.
std::optional<std::vector<FieldElement>>
gaussian_solve(const FieldMatrix &matrix, const std::vector<FieldElement> &rhs);

// Square matrix with entry (r, c) = points[c]^r.
FieldMatrix vandermonde(const std::vector<FieldElement> &points);

// p and e with q = p^e, or nullopt when q is not a prime power.
struct PrimePower {
  std::uint64_t p;
  std::uint32_t e;
};
std::optional<PrimePower> prime_power(std::uint64_t q);
bool is_prime(std::uint64_t n);

// Smallest prime power q with q^b >= k*2^k (so q lies in
// [(k2^k)^(1/b), 2(k2^k)^(1/b)) by Bertrand). For b = 1 that is the smallest
// prime power in {k2^k, ..., 2k2^k - 1}. Throws CapExceeded if k*2^k does
// not fit in 62 bits.
std::uint64_t choose_q(int k, int b = 1);

} // namespace lincnf
