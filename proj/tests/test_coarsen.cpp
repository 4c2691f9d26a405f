#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpp/coarsen.hpp"
#include "fpp/gaussian.hpp"

using namespace fpp;

TEST_CASE("box centers are anchored at the origin") {
    CHECK(box_center({0, 0}, 2) == Center{0.5, 0.5});
    CHECK(box_center({3, 5}, 4) == Center{1.5, 5.5});
    CHECK(box_center({-1, 0}, 2) == Center{-1.5, 0.5});
    CHECK(box_center({7, 7}, 1) == Center{7.0, 7.0});
}

TEST_CASE("coarsening examples") {
    const CoarsePath one = l_coarsening({{0, 0}, {1, 0}, {1, 1}}, 2);
    CHECK(one.centers.size() == 1);
    CHECK(is_simple(one));

    const CoarsePath two = l_coarsening({{0, 0}, {1, 0}, {2, 0}}, 2);
    REQUIRE(two.centers.size() == 2);
    CHECK(two.centers[0] == Center{0.5, 0.5});
    CHECK(two.centers[1] == Center{2.5, 0.5});

    CHECK_THROWS_AS(l_coarsening({{0, 0}}, 3), std::invalid_argument);
}

TEST_CASE("a simple path can have a non-simple coarsening") {
    const LatticePath p{{1, 0}, {2, 0}, {2, 1}, {1, 1}, {0, 1}};
    CHECK(is_self_avoiding(p));
    const CoarsePath c = l_coarsening(p, 2);
    REQUIRE(c.centers.size() == 3);
    CHECK(c.centers[0] == c.centers[2]);
    CHECK_FALSE(is_simple(c));
}

TEST_CASE("monotone staircases have simple coarsenings") {
    for (std::int64_t side : {1, 2, 4, 8}) {
        LatticePath p{{0, 0}};
        std::uint64_t h = static_cast<std::uint64_t>(side);
        for (int s = 0; s < 100; ++s) {
            h = mix64(h);
            p.push_back(p.back() + (h % 2 ? Point{1, 0} : Point{0, 1}));
        }
        CHECK(is_simple(l_coarsening(p, side)));
    }
}

TEST_CASE("unit coarsening of a simple path is the path itself") {
    const LatticePath p{{0, 0}, {0, 1}, {1, 1}, {2, 1}, {2, 0}};
    const CoarsePath c = l_coarsening(p, 1);
    REQUIRE(c.centers.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        CHECK(c.centers[i] == Center{static_cast<double>(p[i].x), static_cast<double>(p[i].y)});
}

TEST_CASE("L-segment recognition") {
    // Coarse shape: above, corner, right (level 1, boxes of side 2).
    const LatticePath from_above{{0, 2}, {0, 1}, {1, 1}, {2, 1}};
    CHECK(is_l_segment(from_above, 1));
    const LatticePath from_below{{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}};
    CHECK(is_l_segment(from_below, 1));
    const LatticePath straight{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
    CHECK_FALSE(is_l_segment(straight, 1));
    const LatticePath two{{0, 0}, {1, 0}, {2, 0}};
    CHECK_FALSE(is_l_segment(two, 1));
    const LatticePath leftward{{2, 2}, {2, 1}, {1, 1}, {0, 1}};
    CHECK_FALSE(is_l_segment(leftward, 1));
}

TEST_CASE("last hit left of a line") {
    const CoarsePath all_left{1, {{0, 0}, {1, 0}, {2, 0}}};
    CHECK(last_hit_left_of(all_left, 5) == Center{2, 0});

    const CoarsePath crossing{2, {{0.5, 0.5}, {2.5, 0.5}, {4.5, 0.5}, {6.5, 0.5}}};
    CHECK(last_hit_left_of(crossing, 3) == Center{2.5, 0.5});

    const CoarsePath recross{2, {{0.5, 0.5}, {2.5, 0.5}, {4.5, 0.5}, {4.5, 2.5}, {2.5, 2.5}, {4.5, 4.5}}};
    CHECK(last_hit_left_of(recross, 3) == Center{2.5, 2.5});

    CHECK_THROWS_AS(last_hit_left_of(CoarsePath{2, {{4.5, 0.5}}}, 3), std::invalid_argument);
}
