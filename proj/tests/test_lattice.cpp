#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fpp/gaussian.hpp"
#include "fpp/lattice.hpp"
#include "fpp/stats.hpp"

using namespace fpp;

TEST_CASE("rectangles and intersection") {
    const Rect a{0, 0, 4, 3};
    CHECK(a.x1() == 3);
    CHECK(a.y1() == 2);
    CHECK(a.area() == 12);
    CHECK(a.contains(Point{3, 2}));
    CHECK_FALSE(a.contains(Point{4, 0}));
    CHECK(intersect(a, Rect{2, 1, 5, 5}) == Rect{2, 1, 2, 2});
    CHECK(intersect(a, Rect{10, 10, 2, 2}).empty());
}

TEST_CASE("lattice path predicates") {
    CHECK(is_lattice_path({{0, 0}, {1, 0}, {1, 1}}));
    CHECK_FALSE(is_lattice_path({{0, 0}, {1, 1}}));
    CHECK(is_self_avoiding({{0, 0}, {1, 0}}));
    CHECK_FALSE(is_self_avoiding({{0, 0}, {1, 0}, {0, 0}}));
}

TEST_CASE("loop erasure keeps endpoints and yields a simple path") {
    std::uint64_t h = 17;
    for (int trial = 0; trial < 200; ++trial) {
        LatticePath walk{{0, 0}};
        for (int s = 0; s < 60; ++s) {
            h = mix64(h);
            const Point d[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            walk.push_back(walk.back() + d[h % 4]);
        }
        const LatticePath e = loop_erase(walk);
        CHECK(e.front() == walk.front());
        CHECK(e.back() == walk.back());
        CHECK(is_lattice_path(e));
        CHECK(is_self_avoiding(e));
    }
}

TEST_CASE("derive_gaussian is pure") {
    const DyadicKey k{KeyKind::Box, 3, {8, 16}, 0};
    CHECK(derive_gaussian(42, k) == derive_gaussian(42, k));
    CHECK(derive_gaussian(42, k) != derive_gaussian(43, k));
    const GaussianSource s{42};
    CHECK(s(k) == derive_gaussian(42, k));
}

TEST_CASE("distinct keys give standard normals") {
    const GaussianSource s{7};
    const int count = 1000000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < count; ++i) {
        const double v = s({KeyKind::Box, 0, {i, 0}, 0});
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / count;
    const double var = sum_sq / count - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(count));
    CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("keys differing only in stream are uncorrelated") {
    const GaussianSource s{11};
    const int count = 100000;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (int i = 0; i < count; ++i) {
        const double x = s({KeyKind::BmIncrement, 0, {i, 0}, 0});
        const double y = s({KeyKind::BmIncrement, 0, {i, 0}, 1});
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    CHECK(std::abs(sxy / std::sqrt(sxx * syy)) < 0.01);
}

TEST_CASE("key alignment rules") {
    CHECK(DyadicKey{KeyKind::Box, 2, {4, 8}, 0}.aligned());
    CHECK_FALSE(DyadicKey{KeyKind::Box, 2, {2, 8}, 0}.aligned());
    CHECK(DyadicKey{KeyKind::StackedRect, 1, {2, 4}, 0}.aligned());
    CHECK(DyadicKey{KeyKind::BmIncrement, 5, {3, 1}, 9}.aligned());
}

TEST_CASE("derived sources are independent streams") {
    const GaussianSource m{5};
    CHECK(m.derived(1, 0).master_seed != m.derived(1, 1).master_seed);
    CHECK(m.derived(1, 0).master_seed != m.derived(2, 0).master_seed);
    CHECK(m.derived(1, 0).master_seed == m.derived(1, 0).master_seed);
}

TEST_CASE("summary statistics") {
    const std::vector<double> xs{1, 2, 3, 4};
    CHECK(mean(xs) == doctest::Approx(2.5));
    CHECK(std_error(xs) == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(median_of_means(xs, 4) == doctest::Approx(2.5));
    CHECK(median_of_means(std::vector<double>{1, 1, 1, 100}, 4) == doctest::Approx(1.0));
    const LineFit f = least_squares(std::vector<double>{0, 1, 2}, std::vector<double>{1, 3, 5});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(chi_square_pvalue(0.0, 3) == doctest::Approx(1.0));
    CHECK(chi_square_pvalue(11.345, 3) == doctest::Approx(0.01).epsilon(0.01));
    const std::vector<std::uint64_t> counts{50, 50};
    const std::vector<double> probs{0.5, 0.5};
    CHECK(chi_square_gof_pvalue(counts, probs) == doctest::Approx(1.0));
}
