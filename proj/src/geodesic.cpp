#include "fpp/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace fpp {

WeightGrid make_weight_grid(Rect region, std::span<const double> field_values, double gamma,
                            Exec exec) {
    if (static_cast<std::int64_t>(field_values.size()) != region.area())
        throw std::invalid_argument("field size does not match the region");
    WeightGrid grid{region, std::vector<double>(field_values.size())};
    const auto count = static_cast<std::int64_t>(field_values.size());
    double* w = grid.weights.data();
    const double* f = field_values.data();
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (std::int64_t i = 0; i < count; ++i) w[i] = std::exp(gamma * f[i]);
    return grid;
}

WeightGrid make_weight_grid(const FieldSample& field, double gamma, Exec exec) {
    return make_weight_grid(field.spec.rect(), field.values, gamma, exec);
}

namespace {

struct Layer {
    Rect box;
    std::int64_t offset = 0;
};

// Vertex-weighted Dijkstra over a stack of boxes. A state is (layer, point);
// its distance includes the weight of every vertex on the best path to it.
template <typename IsTarget>
CrossingResult layered_dijkstra(const WeightGrid& grid, std::span<const Rect> boxes,
                                std::span<const Point> sources, IsTarget is_target) {
    std::vector<Layer> layers;
    std::int64_t total = 0;
    for (const Rect& b : boxes) {
        if (b.empty() || !grid.region.contains(b))
            throw std::invalid_argument("search box empty or outside the weight grid");
        layers.push_back({b, total});
        total += b.area();
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<std::size_t>(total), inf);
    std::vector<std::int64_t> pred(static_cast<std::size_t>(total), -1);
    std::vector<unsigned char> done(static_cast<std::size_t>(total), 0);

    auto state_of = [&](std::size_t layer, Point p) {
        const Rect& b = layers[layer].box;
        return layers[layer].offset + (p.y - b.y0) * b.width + (p.x - b.x0);
    };
    auto layer_of = [&](std::int64_t s) {
        std::size_t t = 0;
        while (t + 1 < layers.size() && s >= layers[t + 1].offset) ++t;
        return t;
    };
    auto point_of = [&](std::size_t layer, std::int64_t s) {
        const Rect& b = layers[layer].box;
        const std::int64_t local = s - layers[layer].offset;
        return Point{b.x0 + local % b.width, b.y0 + local / b.width};
    };

    using Entry = std::pair<double, std::int64_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    for (Point p : sources) {
        if (!layers.front().box.contains(p)) continue;
        const std::int64_t s = state_of(0, p);
        const double d = grid.at(p);
        if (d < dist[s]) {
            dist[s] = d;
            pred[s] = -1;
            queue.emplace(d, s);
        }
    }

    static constexpr std::int64_t dx[4] = {-1, 1, 0, 0};
    static constexpr std::int64_t dy[4] = {0, 0, -1, 1};
    std::int64_t reached = -1;
    while (!queue.empty()) {
        const auto [d, s] = queue.top();
        queue.pop();
        if (done[s]) continue;
        done[s] = 1;
        const std::size_t t = layer_of(s);
        const Point p = point_of(t, s);
        if (t + 1 == layers.size() && is_target(p)) {
            reached = s;
            break;
        }
        for (int dir = 0; dir < 4; ++dir) {
            const Point q{p.x + dx[dir], p.y + dy[dir]};
            for (std::size_t nt = t; nt <= t + 1 && nt < layers.size(); ++nt) {
                if (!layers[nt].box.contains(q)) continue;
                const std::int64_t ns = state_of(nt, q);
                if (done[ns]) continue;
                const double nd = d + grid.at(q);
                if (nd < dist[ns]) {
                    dist[ns] = nd;
                    pred[ns] = s;
                    queue.emplace(nd, ns);
                }
            }
        }
    }
    if (reached < 0) throw std::runtime_error("no admissible path between sources and targets");

    CrossingResult out;
    out.weight = dist[reached];
    for (std::int64_t s = reached; s >= 0; s = pred[s]) out.path.push_back(point_of(layer_of(s), s));
    std::reverse(out.path.begin(), out.path.end());
    return out;
}

}  // namespace

CrossingResult crossing_distance(const WeightGrid& grid, const Rect& sub, Direction dir) {
    if (sub.empty()) throw std::invalid_argument("empty crossing rectangle");
    std::vector<Point> sources;
    if (dir == Direction::LeftRight) {
        for (std::int64_t y = sub.y0; y <= sub.y1(); ++y) sources.push_back({sub.x0, y});
        const std::int64_t right = sub.x1();
        return layered_dijkstra(grid, std::span<const Rect>(&sub, 1), sources,
                                [right](Point p) { return p.x == right; });
    }
    for (std::int64_t x = sub.x0; x <= sub.x1(); ++x) sources.push_back({x, sub.y1()});
    const std::int64_t bottom = sub.y0;
    return layered_dijkstra(grid, std::span<const Rect>(&sub, 1), sources,
                            [bottom](Point p) { return p.y == bottom; });
}

double path_weight(const WeightGrid& grid, const LatticePath& path) {
    std::set<Point> seen;
    double total = 0.0;
    for (Point p : path) {
        if (!grid.region.contains(p)) throw std::out_of_range("path leaves the weight grid");
        if (seen.insert(p).second) total += grid.at(p);
    }
    return total;
}

CrossingResult box_chain_path(const WeightGrid& grid, std::span<const Rect> chain,
                              std::span<const Point> sources, std::span<const Point> targets) {
    if (chain.empty()) throw std::invalid_argument("empty box chain");
    std::set<Point> target_set(targets.begin(), targets.end());
    return layered_dijkstra(grid, chain, sources,
                            [&target_set](Point p) { return target_set.count(p) != 0; });
}

namespace {

// Index in `path` of its first vertex that also lies on `other`.
std::size_t first_shared(const LatticePath& path, const LatticePath& other) {
    std::set<Point> members(other.begin(), other.end());
    for (std::size_t i = 0; i < path.size(); ++i)
        if (members.count(path[i])) return i;
    throw std::runtime_error("paths do not intersect");
}

std::size_t index_in(const LatticePath& path, Point p) {
    return static_cast<std::size_t>(std::find(path.begin(), path.end(), p) - path.begin());
}

// Appends path[from..to] (either direction), skipping a repeated joint point.
void append_segment(LatticePath& out, const LatticePath& path, std::size_t from, std::size_t to) {
    const std::ptrdiff_t step = to >= from ? 1 : -1;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(from);; i += step) {
        const Point p = path[static_cast<std::size_t>(i)];
        if (out.empty() || out.back() != p) out.push_back(p);
        if (i == static_cast<std::ptrdiff_t>(to)) break;
    }
}

}  // namespace

CrossingResult annulus_contour(const WeightGrid& grid, const Rect& inner, const Rect& outer) {
    if (!grid.region.contains(outer)) throw std::invalid_argument("annulus leaves the weight grid");
    if (inner.empty() || inner.x0 <= outer.x0 || inner.y0 <= outer.y0 || inner.x1() >= outer.x1() ||
        inner.y1() >= outer.y1())
        throw std::invalid_argument("annulus too thin: every band needs width >= 1");

    const Rect top{outer.x0, inner.y1() + 1, outer.width, outer.y1() - inner.y1()};
    const Rect bottom{outer.x0, outer.y0, outer.width, inner.y0 - outer.y0};
    const Rect left{outer.x0, outer.y0, inner.x0 - outer.x0, outer.height};
    const Rect right{inner.x1() + 1, outer.y0, outer.x1() - inner.x1(), outer.height};

    const LatticePath t = crossing_distance(grid, top, Direction::LeftRight).path;
    const LatticePath b = crossing_distance(grid, bottom, Direction::LeftRight).path;
    const LatticePath l = crossing_distance(grid, left, Direction::TopDown).path;
    const LatticePath r = crossing_distance(grid, right, Direction::TopDown).path;

    const Point p1 = t[first_shared(t, l)];
    const Point p2 = t[first_shared(t, r)];
    const Point p3 = r[first_shared(r, b)];
    const Point p4 = b[first_shared(b, l)];

    LatticePath ring;
    append_segment(ring, t, index_in(t, p1), index_in(t, p2));
    append_segment(ring, r, index_in(r, p2), index_in(r, p3));
    append_segment(ring, b, index_in(b, p3), index_in(b, p4));
    append_segment(ring, l, index_in(l, p4), index_in(l, p1));
    if (ring.size() > 1 && ring.back() == ring.front()) ring.pop_back();
    return {path_weight(grid, ring), ring};
}

LatticePath splice(const LatticePath& a, const LatticePath& b) {
    const std::size_t ia = first_shared(a, b);
    const std::size_t ib = index_in(b, a[ia]);
    LatticePath out(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(ia) + 1);
    out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(ib) + 1, b.end());
    return out;
}

}  // namespace fpp
