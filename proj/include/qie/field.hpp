#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qie {

inline constexpr std::uint32_t kMaxPrime = 1u << 16;

bool is_prime(std::uint64_t n);

// Residue class mod a prime p. Arithmetic is only defined between elements
// sharing the same modulus.
class FieldElement {
 public:
  FieldElement(std::int64_t value, std::uint32_t p);

  std::uint32_t value() const { return value_; }
  std::uint32_t modulus() const { return p_; }

  FieldElement operator+(FieldElement o) const;
  FieldElement operator-(FieldElement o) const;
  FieldElement operator*(FieldElement o) const;
  FieldElement operator-() const;
  FieldElement inverse() const;  // throws std::domain_error on zero

  bool operator==(const FieldElement&) const = default;

 private:
  struct Unchecked {};
  FieldElement(std::uint32_t value, std::uint32_t p, Unchecked) : value_(value), p_(p) {}

  std::uint32_t value_;
  std::uint32_t p_;
};

std::uint32_t mod_reduce(std::int64_t v, std::uint32_t p);

// Alternating bilinear form <x,y> = x A y^T over Z_p.
class SymplecticForm {
 public:
  // Row-major dim x dim matrix, entries reduced mod p. Throws ValidationError
  // if p is not prime, dim is not even and positive, the matrix is not
  // anti-symmetric, or it has a nonzero diagonal entry.
  SymplecticForm(std::uint32_t p, std::uint32_t dim, std::vector<std::int64_t> entries);

  // [[0,a],[-a,0]] blocks along the diagonal.
  static SymplecticForm standard(std::uint32_t p, std::uint32_t dim, std::int64_t a = 1);

  std::uint32_t modulus() const { return p_; }
  std::uint32_t dim() const { return dim_; }
  std::uint32_t at(std::uint32_t row, std::uint32_t col) const { return m_[row * dim_ + col]; }
  const std::vector<std::uint32_t>& entries() const { return m_; }

  std::uint32_t pair(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y) const;
  std::uint32_t determinant() const;
  bool non_degenerate() const { return determinant() != 0; }

 private:
  std::uint32_t p_;
  std::uint32_t dim_;
  std::vector<std::uint32_t> m_;
};

}  // namespace qie
