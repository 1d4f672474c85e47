#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qie/solver.hpp"

namespace qie {

std::uint64_t counting_invariant(const HomSet& h);

// Φ_E = Σ_f q^{|Im f|}, stored as exponent → coefficient (no zero terms).
struct EnhancedPolynomial {
  std::map<std::uint32_t, std::uint64_t> terms;

  std::uint64_t coefficient_sum() const;
  std::uint32_t degree() const { return terms.empty() ? 0 : terms.rbegin()->first; }
  // "25q^1 + 360q^2 + 840q^3", or "0".
  std::string to_text() const;
  bool operator==(const EnhancedPolynomial&) const = default;
};

// Number of distinct colors used by one coloring.
std::uint32_t image_size(std::span<const Element> coloring);

EnhancedPolynomial enhanced_polynomial(const HomSet& h);

// Parses the to_text() form back.
EnhancedPolynomial parse_polynomial(std::string_view text);

// Arcs grouped by shared color. Blocks are ordered by their smallest arc,
// arcs ascending within a block.
struct ColorPartition {
  std::vector<std::vector<ArcIndex>> blocks;  // 0-based arcs

  // "{{1,2,3},{4}}" with 1-based arcs.
  std::string to_string() const;
  auto operator<=>(const ColorPartition&) const = default;
};

ColorPartition color_partition(std::span<const Element> coloring);

struct CensusEntry {
  ColorPartition partition;
  std::uint64_t multiplicity = 0;
};

// image size → partitions (ascending) with how many colorings realize each.
using Census = std::map<std::uint32_t, std::vector<CensusEntry>>;

Census partition_census(const HomSet& h);

struct Verdict {
  bool enhanced = false;  // the polynomials differ
  bool counting = false;  // the coefficient sums differ
};

Verdict distinguishes(const EnhancedPolynomial& a, const EnhancedPolynomial& b);

// Builds a coloring of L_n from a coloring f1 of L_1 (n >= 2): arcs 1-45 copy
// f1, and every later block repeats f1 through the block-to-L1 arc
// correspondence, so Im(f_n) = Im(f1). The result is checked against every
// crossing of L_n. Throws ValidationError if f1 is not a coloring of L_1 or
// the result fails a crossing.
std::vector<Element> extend_coloring(std::span<const Element> f1, unsigned n, const FiniteQuandle& q);

// L1 arc (0-based) that block arc j (0-based offset within a block, 0..39)
// copies its color from.
ArcIndex block_source_arc(std::size_t j);

}  // namespace qie
