#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "emptytri/body.hpp"
#include "emptytri/engine.hpp"
#include "emptytri/rng.hpp"
#include "emptytri/sampling.hpp"
#include "emptytri/stats.hpp"

using namespace emptytri;

namespace {

double shoelace(const std::vector<Vec2>& v) {
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i][0] * v[(i + 1) % v.size()][1] - v[i][1] * v[(i + 1) % v.size()][0];
    return 0.5 * s;
}

}  // namespace

TEST_CASE("normalising the unit disk") {
    auto [disk, map] = normalize_body(ConvexBody::ellipse({0, 0}, {1, 1}));
    CHECK(disk.area() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(disk.as_ellipse().semi_axes[0] == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-15));
    CHECK(disk.inscribed_radius == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)));
    // Standard position: r D inside the body inside 2 r D with r = 27^(-1/4).
    const double r = standard_inner_radius();
    CHECK(r == doctest::Approx(0.43869133765083));
    CHECK(r <= disk.inscribed_radius);
    CHECK(disk.circumscribed_radius <= 2 * r);
    CHECK(disk.rho == doctest::Approx(r / 2));
    CHECK(map.apply({1, 0})[0] == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)));
}

TEST_CASE("normalising a rotated, shifted ellipse lands on the origin disk") {
    auto e = ConvexBody::ellipse({2, -1}, {3, 0.5}, 0.7);
    auto [disk, map] = normalize_body(e);
    CHECK(disk.area() == doctest::Approx(1.0));
    const auto c = map.apply({2, -1});
    CHECK(c[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c[1] == doctest::Approx(0.0).epsilon(1e-12));
    // An end of the major axis maps onto the circle.
    const auto tip = map.apply({2 + 3 * std::cos(0.7), -1 + 3 * std::sin(0.7)});
    CHECK(std::hypot(tip[0], tip[1]) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)));
    CHECK(std::abs(map.det() * e.area() - 1.0) < 1e-12);
}

TEST_CASE("any triangle normalises to the area-one equilateral triangle") {
    for (auto verts : {std::vector<Vec2>{{0, 0}, {1, 0}, {0, 1}}, std::vector<Vec2>{{3, 1}, {10, 2}, {-4, 7}},
                       std::vector<Vec2>{{0, 0}, {100, 0}, {99, 0.5}}}) {
        auto [tri, map] = normalize_body(ConvexBody::polygon(verts));
        CHECK(std::abs(shoelace(tri.as_polygon().vertices) - 1.0) < 1e-12);
        // Equilateral of area one: incircle radius 27^(-1/4), circumradius twice that.
        CHECK(tri.inscribed_radius == doctest::Approx(standard_inner_radius()).epsilon(1e-6));
        CHECK(tri.circumscribed_radius == doctest::Approx(2 * standard_inner_radius()).epsilon(1e-6));
        CHECK(tri.rho == doctest::Approx(tri.inscribed_radius / 2));
    }
}

TEST_CASE("a 2 x 1/2 rectangle becomes a unit square") {
    auto [sq, map] = normalize_body(ConvexBody::polygon({{0, 0}, {2, 0}, {2, 0.5}, {0, 0.5}}));
    const auto& v = sq.as_polygon().vertices;
    CHECK(std::abs(shoelace(v) - 1.0) < 1e-12);
    CHECK(v[1][0] - v[0][0] == doctest::Approx(1.0));
    CHECK(v[2][1] - v[1][1] == doctest::Approx(1.0));
    CHECK(map.m[1] == doctest::Approx(0.0));
    CHECK(map.m[2] == doctest::Approx(0.0));
    CHECK(sq.inscribed_radius == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("unit square normalises by the identity") {
    auto [sq, map] = normalize_body(ConvexBody::unit_square());
    CHECK(map.m == std::array<double, 4>{1, 0, 0, 1});
    CHECK(map.t == Vec2{0, 0});
    CHECK(sq.inscribed_radius == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("body validation and JSON") {
    CHECK_THROWS_AS(ConvexBody::polygon({{0, 0}, {1, 0}, {2, 0}}), BodyError);
    CHECK_THROWS_AS(ConvexBody::polygon({{0, 0}, {2, 0}, {1, 0.1}, {2, 2}, {0, 2}}), BodyError);
    CHECK_THROWS_AS(ConvexBody::ellipse({0, 0}, {0, 1}), BodyError);
    auto cw = ConvexBody::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    CHECK(cw.area() == doctest::Approx(1.0));

    auto j = nlohmann::json::parse(R"({"type":"ellipse","center":[1,2],"semi_axes":[3,4],"rotation":0.5})");
    auto e = ConvexBody::from_json(j);
    CHECK(e.as_ellipse().semi_axes[1] == 4.0);
    CHECK(ConvexBody::from_json(e.to_json()).as_ellipse().rotation == 0.5);
    auto p = ConvexBody::from_json(nlohmann::json::parse(R"({"type":"polygon","vertices":[[0,0],[1,0],[0,1]]})"));
    CHECK(p.area() == doctest::Approx(0.5));
    CHECK_THROWS_AS(ConvexBody::from_json(nlohmann::json::parse(R"({"type":"blob"})")), BodyError);
    CHECK_THROWS_AS(ConvexBody::from_json(nlohmann::json::parse(R"({"type":"polygon"})")), BodyError);
}

TEST_CASE("vertical chords") {
    auto sq = ConvexBody::unit_square();
    auto c = sq.vertical_chord(0.3);
    REQUIRE(c);
    CHECK(c->first == doctest::Approx(0.0));
    CHECK(c->second == doctest::Approx(1.0));
    CHECK(!sq.vertical_chord(1.5));
    auto disk = ConvexBody::unit_area_disk();
    auto d = disk.vertical_chord(0.0);
    REQUIRE(d);
    CHECK(d->second == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)));
}

TEST_CASE("uniform samples stay inside the body") {
    for (const auto& body : {ConvexBody::unit_square(), ConvexBody::unit_area_disk(),
                             normalize_body(ConvexBody::polygon({{0, 0}, {3, 1}, {1, 2}})).first}) {
        auto one = sample_uniform(body, 1, 42);
        REQUIRE(one.size() == 1);
        CHECK(body.contains(one.to_real(0)));
        auto many = sample_uniform(body, 2000, 43);
        for (std::size_t i = 0; i < many.size(); ++i) CHECK(body.contains(many.to_real(i), 1e-12));
    }
}

TEST_CASE("sampling is deterministic in the seed") {
    auto a = sample_uniform(ConvexBody::unit_area_disk(), 500, 7);
    auto b = sample_uniform(ConvexBody::unit_area_disk(), 500, 7);
    auto c = sample_uniform(ConvexBody::unit_area_disk(), 500, 8);
    CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    CHECK(!std::equal(a.begin(), a.end(), c.begin(), c.end()));
    CHECK(a.scale() == Rational{std::int64_t{1} << 30, 1});
}

TEST_CASE("uniformity: square means and disk radial fraction") {
    auto sq = sample_uniform(ConvexBody::unit_square(), 10000, 1);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < sq.size(); ++i) {
        mx += sq.to_real(i)[0];
        my += sq.to_real(i)[1];
    }
    CHECK(mx / 1e4 >= 0.49);
    CHECK(mx / 1e4 <= 0.51);
    CHECK(my / 1e4 >= 0.49);
    CHECK(my / 1e4 <= 0.51);

    auto disk = sample_uniform(ConvexBody::unit_area_disk(), 10000, 2);
    const double half = 0.5 / std::sqrt(std::numbers::pi);
    int inner = 0;
    for (std::size_t i = 0; i < disk.size(); ++i) {
        auto p = disk.to_real(i);
        inner += std::hypot(p[0], p[1]) <= half;
    }
    CHECK(std::abs(inner / 1e4 - 0.25) <= 0.02);
}

TEST_CASE("general-position sampling with fixed prefix points") {
    const auto scale = grid_scale_for(ConvexBody::unit_square());
    std::vector<Point> prefix{quantize({0.5, 0.5}, scale), quantize({0.51, 0.5}, scale)};
    auto set = sample_uniform(ConvexBody::unit_square(), 200, 9, {PositionPolicy::general, prefix});
    CHECK(set.size() == 202);
    CHECK(set[0] == prefix[0]);
    CHECK(set[1] == prefix[1]);
    CHECK(!find_collinear_triple(set));
}

TEST_CASE("collinear quantisation triggers resampling") {
    // Far from the origin the grid scale drops to 1, so a small triangle holds
    // only a few dozen lattice points and collinear draws are frequent.
    auto coarse = ConvexBody::polygon({{1e9, 1e9}, {1e9 + 10, 1e9}, {1e9, 1e9 + 10}});
    CHECK(grid_scale_for(coarse).num == 1);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto pts = sample_uniform(coarse, 5, seed);
        CHECK(is_general_position(pts));
        for (std::size_t i = 0; i < pts.size(); ++i) CHECK(coarse.contains(pts.to_real(i), 0.0));
    }
    auto small = ConvexBody::polygon({{0, 0}, {12, 0}, {12, 12}, {0, 12}});
    CHECK(grid_scale_for(small).num == 1 << 26);
}

TEST_CASE("grid for the unit square with n = 8") {
    auto grid = build_grid(ConvexBody::unit_square(), 8);
    CHECK(grid.mesh == doctest::Approx(1.0 / std::sqrt(8.0)));
    REQUIRE(grid.squares.size() == 4);
    // Row-major: (0,0), (1,0), (0,1), (1,1).
    CHECK(grid.squares[1].col == 1);
    CHECK(grid.squares[1].row == 0);
    CHECK(grid.squares[2].col == 0);
    CHECK(grid.squares[2].row == 1);
    CHECK_THROWS_AS(build_grid(ConvexBody::unit_square(), 7), BodyError);
    CHECK_THROWS_AS(build_grid(ConvexBody::unit_area_disk(), 4), BodyError);
}

TEST_CASE("grid squares are inside the body and disjoint") {
    for (std::size_t n : {200, 2000, 20000}) {
        auto body = ConvexBody::unit_area_disk();
        auto grid = build_grid(body, n);
        CHECK(grid.squares.size() == n / 2);
        CHECK(static_cast<double>(grid.squares.size()) * grid.mesh * grid.mesh == doctest::Approx(0.5));
        for (const auto& sq : grid.squares) {
            CHECK(body.contains(sq.lo));
            CHECK(body.contains(sq.hi));
        }
        for (std::size_t a = 1; a < grid.squares.size(); ++a) {
            const auto& p = grid.squares[a - 1];
            const auto& q = grid.squares[a];
            CHECK(std::pair(p.row, p.col) < std::pair(q.row, q.col));
            if (p.row == q.row && p.col + 1 == q.col) CHECK(p.x1 == q.x0);
        }
    }
}

TEST_CASE("occupancy is a partition") {
    auto body = ConvexBody::unit_area_disk();
    auto grid = build_grid(body, 400);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto pts = sample_uniform(body, 400, seed, {PositionPolicy::distinct, {}});
        auto occ = occupancy_from_sample(pts, grid);
        std::uint64_t total = occ.remainder;
        for (std::size_t i = 0; i < occ.counts.size(); ++i) {
            total += occ.counts[i];
            CHECK(occ.payloads[i].size() == occ.counts[i]);
            for (auto idx : occ.payloads[i]) CHECK(grid.squares[i].contains(pts[idx]));
        }
        CHECK(total == 400);
    }
}

TEST_CASE("occupancy of hand-placed points") {
    auto grid = build_grid(ConvexBody::unit_square(), 8);
    const auto s = grid.scale;
    std::vector<Point> inside{quantize({0.1, 0.1}, s), quantize({0.2, 0.05}, s), quantize({0.05, 0.3}, s)};
    auto occ = occupancy_from_sample(PointSet(inside, s), grid);
    CHECK(occ.counts[0] == 3);
    CHECK(occ.counts[1] + occ.counts[2] + occ.counts[3] == 0);
    CHECK(occ.remainder == 0);
    std::vector<Point> outside{quantize({0.9, 0.9}, s), quantize({0.1, 0.95}, s)};
    auto none = occupancy_from_sample(PointSet(outside, s), grid);
    CHECK(none.remainder == 2);
    // A point exactly on an internal edge belongs to the upper square.
    Point edge{grid.squares[1].x0, grid.squares[0].y0 + 5};
    CHECK(grid.locate(edge) == std::optional<std::size_t>(1));
}

TEST_CASE("one square's occupancy is Binomial(n, 1/n)") {
    constexpr std::size_t n = 20;
    constexpr std::uint64_t trials = 100000;
    auto body = ConvexBody::unit_square();
    auto grid = build_grid(body, n);
    std::vector<std::uint64_t> hist(n + 1, 0);
    MeanAccumulator mean;
    for (std::uint64_t t = 0; t < trials; ++t) {
        auto pts = sample_uniform(body, n, derive_seed(99, {t}), {PositionPolicy::distinct, {}});
        auto occ = occupancy_from_sample(pts, grid);
        ++hist[occ.counts[3]];
        mean.add(occ.counts[3]);
    }
    CHECK(std::abs(mean.mean() - 1.0) <= 0.02);
    std::vector<double> probs(n + 1);
    for (std::size_t k = 0; k <= n; ++k) probs[k] = binomial_pmf(n, k, 1.0 / n);
    auto chi = chi_square_test(hist, probs);
    INFO("chi2 = " << chi.statistic << ", dof = " << chi.dof);
    CHECK(chi.p_value > 0.001);
}

TEST_CASE("Poisson grid counts") {
    auto grid = build_grid(ConvexBody::unit_square(), 2000);
    std::uint64_t draws = 0, zeros = 0, total = 0;
    for (std::uint64_t t = 0; draws < 100000; ++t) {
        auto counts = sample_poisson_counts(grid.squares.size(), derive_seed(3, {t}));
        for (auto c : counts) {
            ++draws;
            zeros += c == 0;
            total += c;
        }
    }
    const double mean = static_cast<double>(total) / static_cast<double>(draws);
    CHECK(mean >= 0.99);
    CHECK(mean <= 1.01);
    CHECK(std::abs(static_cast<double>(zeros) / static_cast<double>(draws) - std::exp(-1.0)) <= 0.01);
}

TEST_CASE("Poisson grid payloads are uniform inside their squares") {
    auto grid = build_grid(ConvexBody::unit_square(), 200);
    MeanAccumulator rel_x, rel_y;
    std::uint64_t pairs = 0;
    for (std::uint64_t t = 0; t < 300; ++t) {
        auto model = sample_poisson_grid(grid, derive_seed(11, {t}));
        CHECK(model.payloads.size() == grid.squares.size());
        CHECK(model.remainder > 0);
        for (std::size_t j = 0; j < grid.squares.size(); ++j) {
            const auto& pay = model.payloads[j];
            REQUIRE(pay.size() == model.counts[j]);
            for (const auto& p : pay) CHECK(grid.squares[j].contains(p));
            if (pay.size() != 2) continue;
            ++pairs;
            for (std::size_t i = 0; i < 2; ++i) {
                const auto r = pay.to_real(i);
                rel_x.add((r[0] - grid.squares[j].lo[0]) / grid.mesh);
                rel_y.add((r[1] - grid.squares[j].lo[1]) / grid.mesh);
            }
        }
    }
    CHECK(pairs > 1000);
    CHECK(std::abs(rel_x.mean() - 0.5) < 0.02);
    CHECK(std::abs(rel_y.mean() - 0.5) < 0.02);
}

TEST_CASE("derived seeds differ across paths") {
    CHECK(derive_seed(1, {0}) != derive_seed(1, {1}));
    CHECK(derive_seed(1, {0, 1}) != derive_seed(1, {1, 0}));
    CHECK(derive_seed(1, {5}) == derive_seed(1, {5}));
}
