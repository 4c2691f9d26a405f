#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fpp/lattice.hpp"

namespace fpp {

struct Center {
    double x = 0.0;
    double y = 0.0;
    auto operator<=>(const Center&) const = default;
};

// Box grid anchored at the origin; a box of side L has corner (aL, bL) and
// center corner + (L/2 - 0.5, L/2 - 0.5).
Center box_center(Point p, std::int64_t side);

struct CoarsePath {
    std::int64_t side = 1;
    std::vector<Center> centers;
};

// Exit-time recursion: m_0 = 0 and m_j is the first index whose point leaves
// the box of v_{m_{j-1}}. Throws std::invalid_argument unless side is a power of 2.
CoarsePath l_coarsening(const LatticePath& path, std::int64_t side);

bool is_simple(const CoarsePath& coarse);

// True iff the 2^level-coarsening is one of the two three-box L shapes:
// (above, corner, right) or (below, corner, right).
bool is_l_segment(const LatticePath& path, int level);

// Last center, in path order, whose box lies in the columns x <= x_line. The
// line's own column counts as its left side, so for side 1 the center on the
// line itself qualifies. Throws std::invalid_argument if there is none.
Center last_hit_left_of(const CoarsePath& coarse, std::int64_t x_line);

}  // namespace fpp
