#pragma once

#include <cstdint>
#include <span>

namespace qie::detail {

// 1-based (result, under_in, over); every crossing in these tables is ▷.
struct RawCrossing {
  std::uint32_t r, u, o;
};

std::span<const RawCrossing> hopf_sum_table();
std::span<const RawCrossing> allen_swenberg1_table();
std::span<const RawCrossing> allen_swenberg2_table();

}  // namespace qie::detail
