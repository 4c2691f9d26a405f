#pragma once

#include <span>
#include <vector>

#include "fpp/field.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

// Positive vertex weights over a lattice rectangle, row-major with y outer.
struct WeightGrid {
    Rect region;
    std::vector<double> weights;

    std::size_t index(Point p) const {
        return static_cast<std::size_t>((p.y - region.y0) * region.width + (p.x - region.x0));
    }
    double at(Point p) const { return weights[index(p)]; }
};

// w_z = exp(gamma * field_z).
WeightGrid make_weight_grid(const FieldSample& field, double gamma, Exec exec = Exec::Parallel);
WeightGrid make_weight_grid(Rect region, std::span<const double> field_values, double gamma,
                            Exec exec = Exec::Parallel);

enum class Direction { LeftRight, TopDown };

struct CrossingResult {
    double weight = 0.0;
    LatticePath path;
};

// Exact minimum-weight crossing of `sub` (left to right, or top to bottom),
// counting every visited vertex once, endpoints included. Ties resolve to the
// smallest flat index so repeated calls return the same path.
CrossingResult crossing_distance(const WeightGrid& grid, const Rect& sub, Direction dir);

// Sum of weights over the set of visited vertices.
double path_weight(const WeightGrid& grid, const LatticePath& path);

// Minimum-weight path that visits the boxes of `chain` in order, entering each
// next box once: it starts at a source in chain.front(), may step from box t
// into an adjacent point of box t+1 but never back, and ends at a target in
// chain.back(). Throws std::runtime_error when no such path exists.
CrossingResult box_chain_path(const WeightGrid& grid, std::span<const Rect> chain,
                              std::span<const Point> sources, std::span<const Point> targets);

// Closed contour in outer \ inner surrounding inner, built from minimum
// crossings of the four side bands. The returned path is a closed walk: its
// last point is adjacent to its first.
CrossingResult annulus_contour(const WeightGrid& grid, const Rect& inner, const Rect& outer);

// a up to its first vertex shared with b, then b onward from that vertex.
LatticePath splice(const LatticePath& a, const LatticePath& b);

}  // namespace fpp
