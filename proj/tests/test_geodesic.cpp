#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fpp/coarsen.hpp"
#include "fpp/gaussian.hpp"
#include "fpp/geodesic.hpp"
#include "oracles.hpp"

using namespace fpp;

namespace {

WeightGrid random_grid(Rect region, std::uint64_t seed) {
    WeightGrid g{region, std::vector<double>(static_cast<std::size_t>(region.area()))};
    for (std::size_t i = 0; i < g.weights.size(); ++i)
        g.weights[i] = 0.1 + static_cast<double>(mix64(seed * 1000003 + i) % 1000) / 100.0;
    return g;
}

bool is_crossing(const CrossingResult& r, const Rect& sub, Direction dir) {
    if (r.path.empty() || !is_lattice_path(r.path) || !is_self_avoiding(r.path)) return false;
    for (Point p : r.path)
        if (!sub.contains(p)) return false;
    if (dir == Direction::LeftRight) return r.path.front().x == sub.x0 && r.path.back().x == sub.x1();
    return r.path.front().y == sub.y1() && r.path.back().y == sub.y0;
}

}  // namespace

TEST_CASE("trivial crossings") {
    const WeightGrid one{{0, 0, 1, 1}, {2.5}};
    const CrossingResult r = crossing_distance(one, one.region, Direction::LeftRight);
    CHECK(r.weight == 2.5);
    CHECK(r.path.size() == 1);

    const WeightGrid square{{0, 0, 2, 2}, {1, 1, 1, 1}};
    CHECK(crossing_distance(square, square.region, Direction::LeftRight).weight == 2.0);
    CHECK(crossing_distance(square, square.region, Direction::TopDown).weight == 2.0);
    CHECK_THROWS_AS(crossing_distance(square, Rect{0, 0, 0, 2}, Direction::LeftRight), std::invalid_argument);
}

TEST_CASE("3x3 example agrees with enumeration") {
    // Rows listed top to bottom.
    const std::vector<std::vector<double>> rows{{1, 9, 1}, {1, 1, 1}, {9, 9, 1}};
    WeightGrid g{{0, 0, 3, 3}, std::vector<double>(9)};
    for (int r = 0; r < 3; ++r)
        for (int x = 0; x < 3; ++x) g.weights[static_cast<std::size_t>((2 - r) * 3 + x)] = rows[r][x];
    for (Direction d : {Direction::LeftRight, Direction::TopDown}) {
        oracle::CrossingEnumerator e(g.weights, 3, 3, d == Direction::LeftRight);
        const CrossingResult r = crossing_distance(g, g.region, d);
        CHECK(r.weight == e.solve());
        CHECK(is_crossing(r, g.region, d));
        CHECK(path_weight(g, r.path) == r.weight);
    }
    CHECK(crossing_distance(g, g.region, Direction::LeftRight).weight == 3.0);
}

TEST_CASE("crossing distance equals enumeration on small random grids") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const int w = 2 + static_cast<int>(seed % 3);
        const int h = 2 + static_cast<int>((seed / 3) % 4);
        const WeightGrid g = random_grid({0, 0, w, h}, seed);
        for (Direction d : {Direction::LeftRight, Direction::TopDown}) {
            oracle::CrossingEnumerator e(g.weights, w, h, d == Direction::LeftRight);
            const CrossingResult r = crossing_distance(g, g.region, d);
            CHECK(r.weight == doctest::Approx(e.solve()).epsilon(1e-14));
            CHECK(is_crossing(r, g.region, d));
        }
    }
}

TEST_CASE("sub-rectangle crossings stay inside") {
    const WeightGrid g = random_grid({-4, 3, 12, 9}, 5);
    const Rect sub{-1, 5, 6, 4};
    for (Direction d : {Direction::LeftRight, Direction::TopDown})
        CHECK(is_crossing(crossing_distance(g, sub, d), sub, d));
}

TEST_CASE("path weight uses set semantics") {
    const WeightGrid g = random_grid({0, 0, 3, 3}, 1);
    CHECK(path_weight(g, {{1, 1}}) == g.at({1, 1}));
    CHECK(path_weight(g, {{0, 0}, {1, 0}, {0, 0}}) == path_weight(g, {{0, 0}, {1, 0}}));
    CHECK_THROWS_AS(path_weight(g, {{5, 5}}), std::out_of_range);
}

TEST_CASE("any crossing weighs at least the crossing distance") {
    const WeightGrid g = random_grid({0, 0, 8, 6}, 3);
    const double d = crossing_distance(g, g.region, Direction::LeftRight).weight;
    for (std::int64_t y = 0; y < 6; ++y) {
        LatticePath row;
        for (std::int64_t x = 0; x < 8; ++x) row.push_back({x, y});
        CHECK(path_weight(g, row) >= d);
    }
}

TEST_CASE("raising a weight never lowers the distance") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        WeightGrid g = random_grid({0, 0, 7, 5}, seed);
        const double before = crossing_distance(g, g.region, Direction::LeftRight).weight;
        g.weights[mix64(seed) % g.weights.size()] += 3.0;
        CHECK(crossing_distance(g, g.region, Direction::LeftRight).weight >= before);
    }
}

TEST_CASE("concatenation bound across a split") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const WeightGrid g = random_grid({0, 0, 10, 6}, seed + 77);
        const double whole = crossing_distance(g, g.region, Direction::LeftRight).weight;
        const double left = crossing_distance(g, {0, 0, 5, 6}, Direction::LeftRight).weight;
        const double right = crossing_distance(g, {5, 0, 5, 6}, Direction::LeftRight).weight;
        double column = 0.0;
        for (std::int64_t y = 0; y < 6; ++y) column += g.at({4, y}) + g.at({5, y});
        CHECK(whole <= left + right + column);
    }
}

TEST_CASE("crossings are deterministic") {
    const WeightGrid g = random_grid({0, 0, 30, 20}, 8);
    const CrossingResult a = crossing_distance(g, g.region, Direction::LeftRight);
    const CrossingResult b = crossing_distance(g, g.region, Direction::LeftRight);
    CHECK(a.path == b.path);
    CHECK(a.weight == b.weight);
}

TEST_CASE("box chains visit boxes in order") {
    const WeightGrid g = random_grid({0, 0, 8, 8}, 21);
    const std::vector<Rect> chain{{0, 4, 4, 4}, {4, 4, 4, 4}, {4, 0, 4, 4}};
    const std::vector<Point> sources{{0, 6}};
    const std::vector<Point> targets{{7, 0}, {7, 1}};
    const CrossingResult r = box_chain_path(g, chain, sources, targets);
    CHECK(r.path.front() == Point{0, 6});
    CHECK((r.path.back() == Point{7, 0} || r.path.back() == Point{7, 1}));
    CHECK(is_lattice_path(r.path));
    const CoarsePath c = l_coarsening(r.path, 4);
    REQUIRE(c.centers.size() == 3);
    CHECK(c.centers[0] == Center{1.5, 5.5});
    CHECK(c.centers[1] == Center{5.5, 5.5});
    CHECK(c.centers[2] == Center{5.5, 1.5});
    CHECK(r.weight == doctest::Approx(path_weight(g, r.path)));
    const std::vector<Point> nowhere{{0, 0}};
    CHECK_THROWS_AS(box_chain_path(g, chain, sources, nowhere), std::runtime_error);
}

TEST_CASE("annulus contours separate the inner box") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const WeightGrid g = random_grid({0, 0, 20, 20}, seed + 500);
        const std::int64_t side = 2 + static_cast<std::int64_t>(seed % 3) * 2;
        const Rect inner{6, 6, side, side};
        const Rect outer{6 - side / 2, 6 - side / 2, 2 * side, 2 * side};
        const CrossingResult c = annulus_contour(g, inner, outer);
        CHECK(oracle::separates(c.path, inner, outer));
        CHECK(is_lattice_path(c.path));
        CHECK(adjacent(c.path.back(), c.path.front()));
        for (Point p : c.path) {
            CHECK(outer.contains(p));
            CHECK_FALSE(inner.contains(p));
        }
        double bands = 0.0;
        const Rect top{outer.x0, inner.y1() + 1, outer.width, outer.y1() - inner.y1()};
        const Rect bottom{outer.x0, outer.y0, outer.width, inner.y0 - outer.y0};
        const Rect left{outer.x0, outer.y0, inner.x0 - outer.x0, outer.height};
        const Rect right{inner.x1() + 1, outer.y0, outer.x1() - inner.x1(), outer.height};
        bands += crossing_distance(g, top, Direction::LeftRight).weight;
        bands += crossing_distance(g, bottom, Direction::LeftRight).weight;
        bands += crossing_distance(g, left, Direction::TopDown).weight;
        bands += crossing_distance(g, right, Direction::TopDown).weight;
        CHECK(path_weight(g, c.path) <= bands + 1e-9);
    }
}

TEST_CASE("width-one annulus is the perimeter ring") {
    const WeightGrid g = random_grid({0, 0, 8, 8}, 4);
    const Rect inner{3, 3, 2, 2};
    const Rect outer{2, 2, 4, 4};
    const CrossingResult c = annulus_contour(g, inner, outer);
    std::set<Point> ring(c.path.begin(), c.path.end());
    CHECK(ring.size() == 12);
    CHECK(c.path.size() == 12);
    CHECK_THROWS_AS(annulus_contour(g, Rect{2, 2, 4, 4}, Rect{2, 2, 4, 4}), std::invalid_argument);
    CHECK_THROWS_AS(annulus_contour(g, Rect{6, 6, 2, 2}, Rect{5, 5, 4, 4}), std::invalid_argument);
}

TEST_CASE("splicing") {
    const LatticePath a{{0, 0}, {1, 0}, {2, 0}};
    CHECK(splice(a, a) == a);
    const LatticePath v{{1, 2}, {1, 1}, {1, 0}, {1, -1}};
    const LatticePath s = splice(a, v);
    CHECK(s == LatticePath{{0, 0}, {1, 0}, {1, -1}});
    CHECK_THROWS_AS(splice(a, LatticePath{{5, 5}}), std::runtime_error);

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const WeightGrid g = random_grid({0, 0, 12, 12}, seed + 900);
        const LatticePath h = crossing_distance(g, g.region, Direction::LeftRight).path;
        const LatticePath t = crossing_distance(g, g.region, Direction::TopDown).path;
        const LatticePath st = splice(h, t);
        CHECK(is_lattice_path(st));
        std::set<Point> both(h.begin(), h.end());
        both.insert(t.begin(), t.end());
        for (Point p : st) CHECK(both.count(p) == 1);
    }
}

TEST_CASE("serial and parallel weight grids agree") {
    std::vector<double> field(64 * 64);
    for (std::size_t i = 0; i < field.size(); ++i) field[i] = std::sin(static_cast<double>(i));
    const WeightGrid a = make_weight_grid({0, 0, 64, 64}, field, 1.3, Exec::Serial);
    const WeightGrid b = make_weight_grid({0, 0, 64, 64}, field, 1.3, Exec::Parallel);
    CHECK(a.weights == b.weights);
    CHECK_THROWS_AS(make_weight_grid({0, 0, 3, 3}, field, 1.0), std::invalid_argument);
}
