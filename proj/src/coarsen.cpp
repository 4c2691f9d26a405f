#include "fpp/coarsen.hpp"

#include <set>
#include <stdexcept>

namespace fpp {

namespace {

std::int64_t floor_to(std::int64_t v, std::int64_t side) {
    std::int64_t q = v / side;
    if (v % side != 0 && v < 0) --q;
    return q * side;
}

bool is_power_of_two(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

Center box_center(Point p, std::int64_t side) {
    const double off = static_cast<double>(side) / 2.0 - 0.5;
    return {static_cast<double>(floor_to(p.x, side)) + off,
            static_cast<double>(floor_to(p.y, side)) + off};
}

CoarsePath l_coarsening(const LatticePath& path, std::int64_t side) {
    if (!is_power_of_two(side)) throw std::invalid_argument("coarsening side must be a power of 2");
    CoarsePath out{side, {}};
    if (path.empty()) return out;
    std::size_t m = 0;
    out.centers.push_back(box_center(path[0], side));
    for (std::size_t i = 1; i < path.size(); ++i) {
        const Center here = box_center(path[i], side);
        if (here != box_center(path[m], side)) {
            m = i;
            out.centers.push_back(here);
        }
    }
    return out;
}

bool is_simple(const CoarsePath& coarse) {
    std::set<Center> seen;
    for (const Center& c : coarse.centers)
        if (!seen.insert(c).second) return false;
    return true;
}

bool is_l_segment(const LatticePath& path, int level) {
    const std::int64_t side = std::int64_t{1} << level;
    const CoarsePath coarse = l_coarsening(path, side);
    if (coarse.centers.size() != 3) return false;
    const double s = static_cast<double>(side);
    const Center& a = coarse.centers[0];
    const Center& b = coarse.centers[1];
    const Center& c = coarse.centers[2];
    const bool right_turn_leg = c.x == b.x + s && c.y == b.y;
    const bool from_above = a.x == b.x && a.y == b.y + s;
    const bool from_below = a.x == b.x && a.y == b.y - s;
    return right_turn_leg && (from_above || from_below);
}

Center last_hit_left_of(const CoarsePath& coarse, std::int64_t x_line) {
    const double limit = static_cast<double>(x_line) + 0.5;
    for (auto it = coarse.centers.rbegin(); it != coarse.centers.rend(); ++it)
        if (it->x < limit) return *it;
    throw std::invalid_argument("no coarse center left of the line");
}

}  // namespace fpp
