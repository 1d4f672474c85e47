#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qie/field.hpp"

namespace qie {

using Element = std::uint32_t;
inline constexpr Element kNoElement = std::numeric_limits<Element>::max();

// Crossing sign: Positive applies ▷, Negative applies ▷⁻¹.
enum class Sign : int { Positive = 1, Negative = -1 };

enum class QuandleKind { Symplectic, Takasaki, Alexander, Trivial, Table };

std::string_view to_string(QuandleKind k);

// Quandles up to this many elements carry precomputed op / inv_op tables.
inline constexpr std::uint32_t kTableThreshold = 4096;
// Largest element set build_quandle will accept.
inline constexpr std::uint64_t kMaxQuandleSize = 1ull << 24;

// Finite set {0, ..., size-1} with a binary operation and its right inverse.
// Elements of vector quandles are indexed lexicographically over coordinate
// tuples, first coordinate most significant. Immutable; copies share state.
class FiniteQuandle {
 public:
  static FiniteQuandle symplectic(const SymplecticForm& form, bool require_nondegenerate = true);
  static FiniteQuandle takasaki(std::uint32_t n);
  static FiniteQuandle alexander(std::uint32_t n, std::int64_t t);
  static FiniteQuandle trivial(std::uint32_t size);
  // Row-major operation table, op(a, b) = table[a * size + b]. The table need
  // not satisfy the axioms; columns that are not bijective leave inv_op
  // undefined there (kNoElement).
  static FiniteQuandle from_table(std::uint32_t size, std::vector<Element> table);

  std::uint32_t size() const { return size_; }
  QuandleKind kind() const { return kind_; }
  // Canonical spec string, e.g. "symplectic:p=5,dim=2,matrix=0;1;4;0".
  const std::string& spec() const { return spec_; }
  bool tabulated() const { return !op_.empty(); }
  bool right_invertible() const { return invertible_; }

  // Unchecked hot-path accessors; a and b must be < size().
  Element op(Element a, Element b) const {
    return tabulated() ? op_[static_cast<std::size_t>(a) * size_ + b] : eval(a, b, Sign::Positive);
  }
  Element inv_op(Element a, Element b) const {
    return tabulated() ? inv_[static_cast<std::size_t>(a) * size_ + b] : eval(a, b, Sign::Negative);
  }
  Element apply(Element a, Element b, Sign s) const {
    return s == Sign::Positive ? op(a, b) : inv_op(a, b);
  }

  // Coordinates of a vector-quandle element (single residue otherwise).
  std::vector<std::uint32_t> coordinates(Element e) const;
  Element from_coordinates(const std::vector<std::uint32_t>& coords) const;
  std::string label(Element e) const;

  const std::optional<SymplecticForm>& form() const { return form_; }

 private:
  FiniteQuandle() = default;
  Element eval(Element a, Element b, Sign s) const;
  void finalize();

  QuandleKind kind_ = QuandleKind::Trivial;
  std::uint32_t size_ = 0;
  std::string spec_;
  // Formula parameters.
  std::uint32_t modulus_ = 0;  // p for symplectic, n for takasaki/alexander
  std::uint32_t dim_ = 1;
  std::uint32_t t_ = 0, t_inv_ = 0;
  std::optional<SymplecticForm> form_;
  bool invertible_ = true;
  std::shared_ptr<const std::vector<Element>> table_src_;
  std::vector<Element> op_, inv_;
};

// Parses "kind:key=value,..." (see README for the grammar) and builds the
// quandle. Throws ParseError on malformed text, ValidationError on domain
// violations (non-prime p, odd dim, degenerate form, ...).
FiniteQuandle build_quandle(std::string_view spec);

// Checked single operation; throws std::out_of_range for bad indices and
// ValidationError when ▷⁻¹ is undefined for a non-quandle table.
Element quandle_op(const FiniteQuandle& q, Element a, Element b, Sign sign);

struct AxiomReport {
  bool idempotent = true;
  bool right_invertible = true;
  bool distributive = true;
  // First counterexample per failed axiom, in lexicographic scan order:
  //   idempotent:       (a, a, a)  with a▷a != a
  //   right_invertible: (a, a', b) with a != a' and a▷b = a'▷b
  //   distributive:     (x, y, z)  with (x▷y)▷z != (x▷z)▷(y▷z)
  std::optional<std::array<Element, 3>> idempotent_counterexample;
  std::optional<std::array<Element, 3>> invertibility_counterexample;
  std::optional<std::array<Element, 3>> distributive_counterexample;

  bool ok() const { return idempotent && right_invertible && distributive; }
};

inline constexpr std::uint32_t kAxiomCheckMaxSize = 10000;

// Exhaustive scan. Throws GuardError above kAxiomCheckMaxSize.
AxiomReport check_axioms(const FiniteQuandle& q);

// Orbits of `subset` under all right translations ·▷b and ·▷⁻¹b, b in subset.
// Orbits are sorted internally and ordered by their least element. Throws
// ValidationError if subset is not closed under op/inv_op.
std::vector<std::vector<Element>> connected_components(const FiniteQuandle& q, std::vector<Element> subset);

// Every element except the zero vector (symplectic kinds), or every element.
std::vector<Element> nonzero_elements(const FiniteQuandle& q);

}  // namespace qie
