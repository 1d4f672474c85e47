#include "tables.hpp"

namespace qie::detail {

namespace {

// Labelled connected sum of two Hopf links. Crossing c4 reads x4 = x4 ▷ x3.
constexpr RawCrossing kHopfSum[] = {
    {2, 3, 1}, {3, 2, 4}, {1, 1, 3}, {4, 4, 3},
};

// First Allen-Swenberg link. Rows c13 and c14 follow the replicated block
// of L2 (c53, c54): x10 = x12 ▷ x11 and x13 = x11 ▷ x12.
constexpr RawCrossing kAllenSwenberg1[] = {
    {2, 1, 26}, {26, 27, 1}, {1, 2, 3}, {3, 4, 1}, {4, 5, 3},
    {5, 6, 7}, {8, 7, 6}, {29, 28, 6}, {3, 6, 28}, {9, 8, 7},
    {7, 10, 9}, {11, 9, 10}, {10, 12, 11}, {13, 11, 12}, {12, 14, 13},
    {19, 15, 14}, {22, 15, 13}, {20, 16, 14}, {21, 16, 13}, {14, 17, 21},
    {13, 18, 21}, {20, 17, 22}, {19, 18, 22}, {21, 23, 20}, {22, 24, 20},
    {26, 23, 19}, {25, 24, 19}, {30, 28, 29}, {29, 31, 30}, {32, 30, 31},
    {31, 33, 32}, {34, 32, 33}, {33, 35, 34}, {40, 36, 35}, {38, 36, 34},
    {41, 37, 35}, {39, 37, 34}, {35, 42, 39}, {34, 43, 39}, {41, 42, 38},
    {40, 43, 38}, {25, 44, 40}, {39, 44, 41}, {27, 45, 40}, {38, 45, 41},
};

// Second Allen-Swenberg link: L1 with c9 and c44 rerouted into arcs 47 and
// 46, followed by the replicated 40-crossing block c46-c85.
constexpr RawCrossing kAllenSwenberg2[] = {
    {2, 1, 26}, {26, 27, 1}, {1, 2, 3}, {3, 4, 1}, {4, 5, 3},
    {5, 6, 7}, {8, 7, 6}, {29, 28, 6}, {47, 6, 28}, {9, 8, 7},
    {7, 10, 9}, {11, 9, 10}, {10, 12, 11}, {13, 11, 12}, {12, 14, 13},
    {19, 15, 14}, {22, 15, 13}, {20, 16, 14}, {21, 16, 13}, {14, 17, 21},
    {13, 18, 21}, {20, 17, 22}, {19, 18, 22}, {21, 23, 20}, {22, 24, 20},
    {26, 23, 19}, {25, 24, 19}, {30, 28, 29}, {29, 31, 30}, {32, 30, 31},
    {31, 33, 32}, {34, 32, 33}, {33, 35, 34}, {40, 36, 35}, {38, 36, 34},
    {41, 37, 35}, {39, 37, 34}, {35, 42, 39}, {34, 43, 39}, {41, 42, 38},
    {40, 43, 38}, {25, 44, 40}, {39, 44, 41}, {46, 45, 40}, {38, 45, 41},
    {47, 67, 48}, {49, 48, 67}, {69, 68, 67}, {3, 67, 68}, {50, 49, 48},
    {48, 51, 50}, {52, 50, 51}, {51, 53, 52}, {54, 52, 53}, {53, 55, 54},
    {58, 56, 55}, {61, 56, 54}, {59, 57, 55}, {60, 57, 54}, {55, 62, 60},
    {54, 63, 60}, {59, 62, 61}, {58, 63, 61}, {46, 64, 58}, {60, 64, 59},
    {66, 65, 58}, {61, 65, 59}, {70, 68, 69}, {69, 71, 70}, {72, 70, 71},
    {71, 73, 72}, {74, 72, 73}, {73, 75, 74}, {78, 76, 75}, {81, 76, 74},
    {79, 77, 75}, {80, 77, 74}, {75, 82, 80}, {74, 83, 80}, {79, 82, 81},
    {78, 83, 81}, {66, 84, 78}, {80, 84, 79}, {27, 85, 78}, {81, 85, 79},
};

}  // namespace

std::span<const RawCrossing> hopf_sum_table() { return kHopfSum; }
std::span<const RawCrossing> allen_swenberg1_table() { return kAllenSwenberg1; }
std::span<const RawCrossing> allen_swenberg2_table() { return kAllenSwenberg2; }

}  // namespace qie::detail
