#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qie/diagram.hpp"
#include "qie/quandle.hpp"

namespace qie {

// Assignments over an ordered set of arc variables. Rows are stored flat
// (row-major, stride = variables.size()), sorted lexicographically and
// duplicate-free.
struct PartialSolutionSet {
  std::vector<ArcIndex> variables;  // ascending
  std::vector<Element> cells;

  std::size_t width() const { return variables.size(); }
  std::size_t row_count() const { return variables.empty() ? unit_rows : cells.size() / variables.size(); }
  std::span<const Element> row(std::size_t i) const { return {cells.data() + i * width(), width()}; }

  // A set with no variables holds either the single empty row (1) or none (0).
  std::size_t unit_rows = 1;

  static PartialSolutionSet unit() { return {}; }
  bool operator==(const PartialSolutionSet&) const = default;
};

// All colorings of a diagram by a quandle, each a full assignment over arcs
// 0..arc_count-1, sorted lexicographically.
struct HomSet {
  std::string link_name;
  std::string quandle_spec;
  std::uint32_t arc_count = 0;
  std::uint32_t quandle_size = 0;
  std::vector<Element> cells;
  std::vector<std::string> warnings;

  std::size_t size() const { return arc_count == 0 ? 0 : cells.size() / arc_count; }
  std::span<const Element> coloring(std::size_t i) const { return {cells.data() + i * arc_count, arc_count}; }
  bool same_colorings(const HomSet& o) const { return arc_count == o.arc_count && cells == o.cells; }
};

inline constexpr std::uint64_t kBruteForceGuard = 100'000'000;
inline constexpr std::size_t kDefaultRowCap = 10'000'000;

// Reference oracle: enumerates all |q|^arcs assignments serially. Throws
// GuardError when that count exceeds `guard`.
HomSet brute_force_solve(const LinkDiagram& d, const FiniteQuandle& q, std::uint64_t guard = kBruteForceGuard);

struct Chunk {
  std::vector<std::size_t> crossings;  // indices into LinkDiagram::crossings, ascending
  std::vector<ArcIndex> arcs;          // distinct arcs touched, ascending
};

struct ChunkPlan {
  std::vector<Chunk> chunks;
  // Index of the first chunk of each connected group of crossings.
  std::vector<std::size_t> group_starts;
  bool disconnected() const { return group_starts.size() > 1; }
};

// Disjoint cover of all crossings by chunks of at most chunk_size crossings
// (chunk_size in [1,5]). Chunks are chosen greedily over the arc-sharing
// graph so every chunk after the first of its group shares an arc with the
// union of earlier chunks, preferring the most shared variables.
ChunkPlan partition_chunks(const LinkDiagram& d, int chunk_size);

// Solutions of one chunk's equations. Only a minimal free subset of arcs is
// enumerated; the rest follow from result = under ▷± over and
// under = result ▷∓ over, with consistency checks on re-derivation.
PartialSolutionSet enumerate_chunk(const LinkDiagram& d, const Chunk& chunk, const FiniteQuandle& q,
                                   int threads = 0);

struct JoinOptions {
  std::size_t row_cap = kDefaultRowCap;
  int threads = 0;  // 0: OpenMP default, 1: serial
};

// Indexed equi-join on the shared variables. Disjoint variable sets give a
// cross product and append a warning. Throws GuardError above row_cap.
PartialSolutionSet join_partial(const PartialSolutionSet& a, const PartialSolutionSet& b, const JoinOptions& opts,
                                std::vector<std::string>& warnings);

struct SolveOptions {
  int chunk_size = 3;
  std::size_t row_cap = kDefaultRowCap;
  int threads = 0;
};

// Chunk, enumerate, fold joins in chunk order, expand crossingless arcs.
// The result is identical to brute_force_solve wherever the oracle runs, and
// independent of the thread count.
HomSet solve(const LinkDiagram& d, const FiniteQuandle& q, const SolveOptions& opts = {});

// True iff `coloring` satisfies every crossing of d.
bool satisfies(const LinkDiagram& d, const FiniteQuandle& q, std::span<const Element> coloring);

}  // namespace qie
