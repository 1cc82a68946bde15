#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "emptytri/engine.hpp"
#include "test_support.hpp"

using namespace emptytri;
using emptytri::testing::five_point_example;
using emptytri::testing::parabola_points;
using emptytri::testing::random_general_position;
using emptytri::testing::triangle_with_inner_point;

namespace {

std::set<Triple> collect(const PointSet& pts) {
    std::set<Triple> out;
    enumerate_empty_triangles(pts, [&](const Triple& t) { CHECK(out.insert(t).second); });
    return out;
}

std::uint64_t choose3(std::uint64_t n) { return n * (n - 1) * (n - 2) / 6; }

void check_handshake_and_bounds(const EmptyTriangleReport& r) {
    CHECK(r.degree_sum() == 3 * r.f);
    for (auto d : r.degree.cells()) CHECK(d <= r.n - 2);
    if (r.n >= 5) CHECK(static_cast<std::int64_t>(r.f) >= static_cast<std::int64_t>(r.n * r.n) - 5 * static_cast<std::int64_t>(r.n));
    CHECK(r.f <= choose3(r.n));
}

}  // namespace

TEST_CASE("convex quadrilateral: every triangle is empty") {
    PointSet quad({{0, 0}, {4, 1}, {5, 5}, {1, 4}});
    CHECK(collect(quad).size() == 4);
    auto r = degree_report(quad);
    CHECK(r.f == 4);
    CHECK(r.deg_max == 2);
    for (auto d : r.degree.cells()) CHECK(d == 2);
}

TEST_CASE("triangle with an interior point") {
    // a b c d with d inside abc: the empty triangles are abd, bcd, acd.
    auto set = triangle_with_inner_point();
    auto tris = collect(set);
    CHECK(tris == std::set<Triple>{{0, 1, 3}, {1, 2, 3}, {0, 2, 3}});
    auto r = degree_report(set);
    CHECK(r.f == 3);
    CHECK(r.degree(0, 1) == 1);
    CHECK(r.degree(0, 2) == 1);
    CHECK(r.degree(1, 2) == 1);
    CHECK(r.degree(0, 3) == 2);
    CHECK(r.degree(1, 3) == 2);
    CHECK(r.degree(2, 3) == 2);
    CHECK(r.deg_max == 2);
    CHECK(r.argmax_pair == std::array<std::size_t, 2>{0, 3});
    CHECK(r == r);
}

TEST_CASE("square with an off-centre point") {
    auto set = five_point_example();
    auto tris = collect(set);
    CHECK(tris.size() == 8);
    CHECK(!tris.contains(Triple{0, 1, 2}));
    CHECK(!tris.contains(Triple{0, 1, 3}));
    auto r = degree_report(set);
    CHECK(r.f == 8);
    CHECK(r.degree_sum() == 24);
    CHECK(r.deg_max == 3);
    CHECK(r.degree(0, 4) == 3);
    CHECK(r.argmax_pair == std::array<std::size_t, 2>{0, 4});
    CHECK(pair_degree(set, 0, 4) == 3);
    CHECK(pair_degree(set, 0, 1) == 1);
    CHECK(r == brute_force_empty_triangles(set));
}

TEST_CASE("oracle small cases") {
    auto r = brute_force_empty_triangles(PointSet({{0, 0}, {5, 1}, {2, 7}}));
    CHECK(r.f == 1);
    CHECK(r.deg_max == 1);
    for (auto d : r.degree.cells()) CHECK(d == 1);
    for (std::size_t n = 3; n <= 12; ++n) {
        auto conv = brute_force_empty_triangles(parabola_points(n));
        CHECK(conv.f == choose3(n));
        CHECK(conv.deg_max == n - 2);
    }
    CHECK_THROWS_AS(brute_force_empty_triangles(parabola_points(65)), CapacityError);
    CHECK_THROWS_AS(brute_force_empty_triangles(PointSet({{0, 0}, {1, 1}, {2, 2}, {0, 5}})), GeneralPositionError);
}

TEST_CASE("pair degree on a triangle and error paths") {
    PointSet tri({{0, 0}, {5, 1}, {2, 7}});
    CHECK(pair_degree(tri, 0, 1) == 1);
    CHECK(pair_degree(tri, 2, 1) == 1);
    CHECK_THROWS_AS(pair_degree(tri, 0, 3), std::out_of_range);
    CHECK_THROWS_AS(pair_degree(tri, 1, 1), std::invalid_argument);
}

TEST_CASE("enumerator reports the collinear triple") {
    PointSet set({{0, 0}, {9, 1}, {2, 2}, {4, 4}, {1, 7}});
    try {
        degree_report(set);
        FAIL("expected a general-position error");
    } catch (const GeneralPositionError& e) {
        CHECK(e.triple() == Triple{0, 2, 3});
    }
}

TEST_CASE("fewer than three points") {
    CHECK(degree_report(PointSet()).f == 0);
    auto two = degree_report(PointSet({{0, 0}, {1, 0}}));
    CHECK(two.f == 0);
    CHECK(two.deg_max == 0);
}

TEST_CASE("optimized enumerator matches the oracle on random sets") {
    std::mt19937_64 rng(20240611);
    for (int t = 0; t < 600; ++t) {
        const auto n = 4 + rng() % 9;
        auto set = random_general_position(rng, n, t % 2 ? 40 : 4000);
        auto fast = degree_report(set);
        auto slow = brute_force_empty_triangles(set);
        REQUIRE(fast.f == slow.f);
        REQUIRE(fast.degree == slow.degree);
        REQUIRE(fast.deg_max == slow.deg_max);
        REQUIRE(fast.argmax_pair == slow.argmax_pair);
        check_handshake_and_bounds(fast);
    }
}

TEST_CASE("oracle agreement on medium sets and the enumeration callback") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 20; ++t) {
        auto set = random_general_position(rng, 30 + t, 100000);
        auto fast = degree_report(set);
        CHECK(fast == brute_force_empty_triangles(set));
        CHECK(collect(set).size() == fast.f);
    }
}

TEST_CASE("threaded degree report equals the sequential one") {
    std::mt19937_64 rng(4);
    auto set = random_general_position(rng, 150, 1 << 20);
    auto seq = degree_report(set);
    auto par = degree_report(set, {.threads = 4});
    CHECK(seq.f == par.f);
    CHECK(seq.degree == par.degree);
    CHECK(seq.argmax_pair == par.argmax_pair);
}

TEST_CASE("convex position n = 3..30") {
    for (std::size_t n = 3; n <= 30; ++n) {
        auto r = degree_report(parabola_points(n));
        CHECK(r.f == choose3(n));
        CHECK(r.deg_max == n - 2);
    }
}

TEST_CASE("affine invariance under unimodular maps") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::int64_t> shear(-3, 3);
    for (int t = 0; t < 30; ++t) {
        auto set = random_general_position(rng, 10 + t % 15, 1000);
        auto base = degree_report(set);
        for (int m = 0; m < 5; ++m) {
            const auto a = shear(rng), b = shear(rng);
            // [[1, a], [0, 1]] * [[1, 0], [b, 1]], optionally reflected.
            AffineMap map{{1 + a * b, a, b, 1}, {shear(rng), shear(rng)}, 1};
            if (m % 2) map.m = {map.m[0], map.m[1], -map.m[2], -map.m[3]};
            auto image = degree_report(apply_affine(set, map));
            CHECK(image.f == base.f);
            CHECK(image.deg_max == base.deg_max);
            CHECK(image.degree == base.degree);
        }
    }
}

TEST_CASE("histogram") {
    auto r = degree_report(five_point_example());
    auto h = r.degree_histogram();
    REQUIRE(h.size() == 4);
    std::uint64_t pairs = 0, weighted = 0;
    for (std::size_t d = 0; d < h.size(); ++d) {
        pairs += h[d];
        weighted += d * h[d];
    }
    CHECK(pairs == 10);
    CHECK(weighted == 24);
}

TEST_CASE("near pairs") {
    PointSet tri({{0, 0}, {1, 0}, {0, 1}});
    CHECK(near_pairs(tri, 1.0).count == 2);
    CHECK(near_pairs(tri, 0.5).count == 0);
    CHECK(near_pairs_grid(tri, 2).count == 3);

    PointSet scaled({{0, 0}, {100, 0}, {0, 100}}, Rational{100, 1});
    CHECK(near_pairs(scaled, 1.0).threshold_sq == 10000);
    CHECK(near_pairs(scaled, 1.0).count == 2);
    CHECK_THROWS_AS(near_pairs(tri, 0.0), std::invalid_argument);
}

TEST_CASE("bucketed near pairs equal the all-pairs scan") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 200; ++t) {
        auto set = random_general_position(rng, 2 + rng() % 60, t % 3 == 0 ? 50 : 5000);
        for (wide_int thr : {wide_int{0}, wide_int{1}, wide_int{25}, wide_int{4000}, wide_int{1} << 40}) {
            auto stat = near_pairs_grid(set, thr, true);
            CHECK(stat.count == near_pairs_scan(set, thr));
            CHECK(stat.pairs.size() == stat.count);
        }
    }
    // Negative coordinates exercise the floor division in the bucketing.
    PointSet neg({{-3, -3}, {-1, -2}, {2, 2}, {-7, 5}});
    CHECK(near_pairs_grid(neg, 5).count == near_pairs_scan(neg, 5));
}

TEST_CASE("thresholded degree sum") {
    auto set = five_point_example();
    auto full = degree_report(set);
    // Below the minimum distance: empty sum.
    CHECK(thresholded_degree_sum(set, 1.0) == 0);
    // Beyond the diameter every pair qualifies.
    CHECK(thresholded_degree_sum(set, 20.0) == 3 * full.f);
    // Only the two pairs at distance sqrt(41) qualify: (a, e) and (b, e).
    auto near = near_pairs_grid(set, 41, true);
    REQUIRE(near.count == 2);
    const auto oracle = brute_force_empty_triangles(set);
    CHECK(thresholded_degree_sum(full, near) == oracle.degree(0, 4) + oracle.degree(1, 4));
    CHECK(oracle.degree(0, 4) + oracle.degree(1, 4) == 6);
}

TEST_CASE("first-moment inequality on random sets") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 100; ++t) {
        auto set = random_general_position(rng, 5 + rng() % 40, 10000);
        auto report = degree_report(set);
        for (wide_int thr : {wide_int{100}, wide_int{10000}, wide_int{1000000}, wide_int{300000000}}) {
            auto near = near_pairs_grid(set, thr, true);
            auto lhs = thresholded_degree_sum(report, near);
            CHECK(lhs <= near.count * report.deg_max);
            if (near.count == 0) CHECK(lhs == 0);
        }
        auto slow_sum = thresholded_degree_sum(set, 30.0);
        CHECK(slow_sum == thresholded_degree_sum(report, near_pairs(set, 30.0, true)));
    }
}
