#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qie/quandle.hpp"

namespace qie {

// Arc indices are 0-based in memory and 1-based in files and reports.
using ArcIndex = std::uint32_t;

// result = under_in ▷ over (Positive) or under_in ▷⁻¹ over (Negative).
struct Crossing {
  ArcIndex result = 0;
  ArcIndex under_in = 0;
  ArcIndex over = 0;
  Sign sign = Sign::Positive;

  bool operator==(const Crossing&) const = default;
};

struct LinkDiagram {
  std::string name;
  std::uint32_t arc_count = 0;
  std::vector<Crossing> crossings;
  bool tangle = false;  // open tangles are validated leniently

  bool operator==(const LinkDiagram&) const = default;
};

enum class ValidationMode { Strict, Lenient };

struct ValidationReport {
  std::vector<std::string> violations;
  bool clean() const { return violations.empty(); }
};

// Lenient: every arc index is in range and arc_count > 0.
// Strict additionally: each arc is an under-strand endpoint (result or
// under_in slot) exactly twice, or is a crossingless component that no
// crossing mentions.
ValidationReport validate(const LinkDiagram& d, ValidationMode mode);

// Parses a link file: canonical JSON, or the plain-text form
//   # name: H
//   # arcs: 4
//   c1: x2 = x3 * x1      (▷;  "/" for ▷⁻¹)
// Validates strictly unless the diagram is marked as a tangle. Throws
// ParseError (with line/offset) or ValidationError.
LinkDiagram parse_link(std::string_view text);
// Same, checked only to the given mode (e.g. lenient for raw transcriptions).
LinkDiagram parse_link(std::string_view text, ValidationMode mode);
LinkDiagram read_link_file(const std::filesystem::path& path);
LinkDiagram read_link_file(const std::filesystem::path& path, ValidationMode mode);

// Canonical JSON: keys name, arcs, [tangle], crossings; crossings as
// {"r","u","o","s"} in listed order; no insignificant whitespace.
std::string serialize(const LinkDiagram& d);
// Plain-text form accepted by parse_link.
std::string to_text(const LinkDiagram& d);

inline constexpr unsigned kDefaultMaxAllenSwenberg = 8;

// Connected sum of two Hopf links, 4 arcs / 4 crossings.
LinkDiagram gen_hopf_sum();
// n = 0: the Hopf sum; n = 1, 2: the embedded tables; n >= 3: replicated
// blocks. Throws GuardError for n > max_n.
LinkDiagram gen_allen_swenberg(unsigned n, unsigned max_n = kDefaultMaxAllenSwenberg);
// Replication rule applied for any n >= 2 (n = 2 reproduces the embedded L2).
LinkDiagram replicate_allen_swenberg(unsigned n);
// unknot, hopf, trefoil, figure8, trefoil_r1.
LinkDiagram gen_test_link(std::string_view name);
// Generator names: hopfsum, aslink:N, and the gen_test_link names.
LinkDiagram generate(std::string_view name, unsigned max_n = kDefaultMaxAllenSwenberg);

// Arc layout of the Allen-Swenberg family.
inline constexpr ArcIndex kAsPrefixArcs = 45;  // arcs of L1
inline constexpr ArcIndex kAsBlockArcs = 40;   // arcs added per extra block
inline constexpr std::uint32_t kAsBlockCrossings = 40;

// An injective arc map phi (indexed by `from` arc) with phi(from crossing
// set) = `to` crossing set as multisets, respecting `pinned`. Arcs that
// appear in no crossing of `from` map to kNoArc.
inline constexpr ArcIndex kNoArc = static_cast<ArcIndex>(-1);
std::optional<std::vector<ArcIndex>> find_arc_isomorphism(std::span<const Crossing> from, std::uint32_t from_arcs,
                                                          std::span<const Crossing> to, std::uint32_t to_arcs,
                                                          const std::map<ArcIndex, ArcIndex>& pinned = {});

// Same crossing multiset after some bijective relabeling of arcs.
bool same_up_to_relabeling(const LinkDiagram& a, const LinkDiagram& b);

}  // namespace qie
