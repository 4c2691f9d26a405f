#include "fpp/lattice.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace fpp {

namespace {

struct PointHash {
    std::size_t operator()(Point p) const noexcept {
        return std::hash<std::int64_t>{}(p.x * 0x9e3779b97f4a7c15LL ^ p.y);
    }
};

}  // namespace

Rect intersect(const Rect& a, const Rect& b) {
    const std::int64_t x0 = std::max(a.x0, b.x0);
    const std::int64_t y0 = std::max(a.y0, b.y0);
    const std::int64_t x1 = std::min(a.x1(), b.x1());
    const std::int64_t y1 = std::min(a.y1(), b.y1());
    if (x1 < x0 || y1 < y0) return {x0, y0, 0, 0};
    return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

bool is_lattice_path(const LatticePath& path) {
    if (path.empty()) return false;
    for (std::size_t i = 1; i < path.size(); ++i)
        if (!adjacent(path[i - 1], path[i])) return false;
    return true;
}

bool is_self_avoiding(const LatticePath& path) {
    std::set<Point> seen;
    for (Point p : path)
        if (!seen.insert(p).second) return false;
    return true;
}

LatticePath loop_erase(const LatticePath& walk) {
    LatticePath out;
    std::unordered_map<Point, std::size_t, PointHash> index;
    out.reserve(walk.size());
    for (Point p : walk) {
        auto it = index.find(p);
        if (it != index.end()) {
            for (std::size_t k = it->second + 1; k < out.size(); ++k) index.erase(out[k]);
            out.resize(it->second + 1);
            continue;
        }
        index.emplace(p, out.size());
        out.push_back(p);
    }
    return out;
}

}  // namespace fpp
