#include "qie/field.hpp"

#include <stdexcept>
#include <string>

#include "qie/error.hpp"

namespace qie {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::uint32_t mod_reduce(std::int64_t v, std::uint32_t p) {
  std::int64_t r = v % static_cast<std::int64_t>(p);
  if (r < 0) r += p;
  return static_cast<std::uint32_t>(r);
}

namespace {

void require_prime(std::uint32_t p) {
  if (p > kMaxPrime)
    throw ValidationError("modulus " + std::to_string(p) + " exceeds supported maximum " +
                          std::to_string(kMaxPrime));
  if (!is_prime(p)) throw ValidationError("modulus " + std::to_string(p) + " is not prime");
}

std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % p);
}

std::uint32_t pow_mod(std::uint32_t a, std::uint32_t e, std::uint32_t p) {
  std::uint32_t r = 1 % p;
  while (e) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

}  // namespace

FieldElement::FieldElement(std::int64_t value, std::uint32_t p) : p_(p) {
  require_prime(p);
  value_ = mod_reduce(value, p);
}

FieldElement FieldElement::operator+(FieldElement o) const {
  return {static_cast<std::uint32_t>((value_ + o.value_) % p_), p_, Unchecked{}};
}

FieldElement FieldElement::operator-(FieldElement o) const {
  return {static_cast<std::uint32_t>((value_ + p_ - o.value_) % p_), p_, Unchecked{}};
}

FieldElement FieldElement::operator*(FieldElement o) const {
  return {mul_mod(value_, o.value_, p_), p_, Unchecked{}};
}

FieldElement FieldElement::operator-() const {
  return {static_cast<std::uint32_t>((p_ - value_) % p_), p_, Unchecked{}};
}

FieldElement FieldElement::inverse() const {
  if (value_ == 0) throw std::domain_error("zero has no inverse");
  return {pow_mod(value_, p_ - 2, p_), p_, Unchecked{}};
}

SymplecticForm::SymplecticForm(std::uint32_t p, std::uint32_t dim, std::vector<std::int64_t> entries)
    : p_(p), dim_(dim) {
  require_prime(p);
  if (dim == 0 || dim % 2 != 0)
    throw ValidationError("symplectic dimension must be even and positive, got " + std::to_string(dim));
  if (entries.size() != static_cast<std::size_t>(dim) * dim)
    throw ValidationError("symplectic matrix needs " + std::to_string(dim * dim) + " entries, got " +
                          std::to_string(entries.size()));
  m_.reserve(entries.size());
  for (auto e : entries) m_.push_back(mod_reduce(e, p));
  for (std::uint32_t i = 0; i < dim; ++i) {
    // Anti-symmetry alone is vacuous on the diagonal when p = 2.
    if (at(i, i) != 0)
      throw ValidationError("symplectic matrix has nonzero diagonal entry at (" + std::to_string(i) + "," +
                            std::to_string(i) + ")");
    for (std::uint32_t j = i + 1; j < dim; ++j)
      if ((at(i, j) + at(j, i)) % p != 0)
        throw ValidationError("symplectic matrix is not anti-symmetric at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
  }
}

SymplecticForm SymplecticForm::standard(std::uint32_t p, std::uint32_t dim, std::int64_t a) {
  std::vector<std::int64_t> e(static_cast<std::size_t>(dim) * dim, 0);
  for (std::uint32_t b = 0; b + 1 < dim; b += 2) {
    e[b * dim + b + 1] = a;
    e[(b + 1) * dim + b] = -a;
  }
  return SymplecticForm(p, dim, std::move(e));
}

std::uint32_t SymplecticForm::pair(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y) const {
  std::uint64_t acc = 0;
  for (std::uint32_t i = 0; i < dim_; ++i) {
    if (x[i] == 0) continue;
    std::uint64_t row = 0;
    for (std::uint32_t j = 0; j < dim_; ++j) row += static_cast<std::uint64_t>(at(i, j)) * y[j];
    acc = (acc + (row % p_) * x[i]) % p_;
  }
  return static_cast<std::uint32_t>(acc);
}

std::uint32_t SymplecticForm::determinant() const {
  // Gaussian elimination over Z_p.
  std::vector<std::uint32_t> a = m_;
  const std::uint32_t n = dim_;
  std::uint32_t det = 1;
  for (std::uint32_t col = 0; col < n; ++col) {
    std::uint32_t piv = col;
    while (piv < n && a[piv * n + col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      for (std::uint32_t j = 0; j < n; ++j) std::swap(a[piv * n + j], a[col * n + j]);
      det = (p_ - det) % p_;
    }
    const std::uint32_t pv = a[col * n + col];
    det = mul_mod(det, pv, p_);
    const std::uint32_t inv = pow_mod(pv, p_ - 2, p_);
    for (std::uint32_t r = col + 1; r < n; ++r) {
      const std::uint32_t f = mul_mod(a[r * n + col], inv, p_);
      if (f == 0) continue;
      for (std::uint32_t j = col; j < n; ++j)
        a[r * n + j] = (a[r * n + j] + p_ - mul_mod(f, a[col * n + j], p_)) % p_;
    }
  }
  return det;
}

}  // namespace qie
