#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <vector>

namespace fpp {

struct Point {
    std::int64_t x = 0;
    std::int64_t y = 0;
    auto operator<=>(const Point&) const = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }

inline bool adjacent(Point a, Point b) {
    return std::llabs(a.x - b.x) + std::llabs(a.y - b.y) == 1;
}

// Closed lattice rectangle [x0, x0 + width - 1] x [y0, y0 + height - 1].
struct Rect {
    std::int64_t x0 = 0;
    std::int64_t y0 = 0;
    std::int64_t width = 0;
    std::int64_t height = 0;

    std::int64_t x1() const { return x0 + width - 1; }
    std::int64_t y1() const { return y0 + height - 1; }
    bool empty() const { return width <= 0 || height <= 0; }
    std::int64_t area() const { return empty() ? 0 : width * height; }

    bool contains(Point p) const {
        return p.x >= x0 && p.x <= x1() && p.y >= y0 && p.y <= y1();
    }
    bool contains(const Rect& r) const {
        return r.empty() || (r.x0 >= x0 && r.x1() <= x1() && r.y0 >= y0 && r.y1() <= y1());
    }
    auto operator<=>(const Rect&) const = default;
};

Rect intersect(const Rect& a, const Rect& b);

// Ordered sequence of 4-adjacent lattice points.
using LatticePath = std::vector<Point>;

bool is_lattice_path(const LatticePath& path);
bool is_self_avoiding(const LatticePath& path);

// Chronological loop erasure: the result is simple, 4-adjacent, and keeps the
// endpoints of the input walk.
LatticePath loop_erase(const LatticePath& walk);

}  // namespace fpp
