#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "emptytri/body.hpp"
#include "emptytri/quadrature.hpp"

using namespace emptytri;

namespace {

constexpr double kPi = 3.141592653589793;

// Closed form on the unit square when x y is horizontal at height h0:
// A = (d/2)|v - h0| and the u-direction integrates to 1.
double square_moment(double d, double h0, unsigned m) {
    auto side = [&](double len) {
        const double c = d / 2;
        return (1 - std::pow(1 - c * len, m + 1.0)) / (c * (m + 1.0));
    };
    return side(h0) + side(1 - h0);
}

// Midpoint rule in polar coordinates about the disk centre.
double disk_moment_polar(double radius, const Vec2& x, const Vec2& y, unsigned m, int nr, int nt) {
    double total = 0.0;
    const double dr = radius / nr, dt = 2 * kPi / nt;
    for (int i = 0; i < nr; ++i) {
        const double r = (i + 0.5) * dr;
        for (int j = 0; j < nt; ++j) {
            const double t = (j + 0.5) * dt;
            const double u = r * std::cos(t), v = r * std::sin(t);
            const double a = 0.5 * std::abs((y[0] - x[0]) * (v - x[1]) - (y[1] - x[1]) * (u - x[0]));
            total += std::pow(1 - a, m) * r;
        }
    }
    return total * dr * dt;
}

}  // namespace

TEST_CASE("exponent zero gives the area") {
    const auto sq = ConvexBody::unit_square();
    CHECK(triangle_area_moment(sq, {0.5, 0.5}, {0.51, 0.5}, 0).value == 1.0);
    CHECK(expected_pair_degree(sq, {0.5, 0.5}, {0.51, 0.5}, 3).value == 1.0);
    const auto tri = ConvexBody::polygon({{0, 0}, {2, 0}, {0, 3}});
    CHECK(triangle_area_moment(tri, {0.5, 0.5}, {0.6, 0.5}, 0).value == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("unit square against the closed form") {
    const auto sq = ConvexBody::unit_square();
    for (unsigned m : {1U, 2U, 10U, 97U, 997U})
        for (double h0 : {0.5, 0.3}) {
            const double d = 0.01;
            const auto q = triangle_area_moment(sq, {0.5, h0}, {0.5 + d, h0}, m);
            CHECK(q.value == doctest::Approx(square_moment(d, h0, m)).epsilon(1e-7));
        }
    // Vertical x y: the same value by symmetry of the square.
    const auto v = triangle_area_moment(sq, {0.3, 0.5}, {0.3, 0.51}, 97);
    CHECK(v.value == doctest::Approx(square_moment(0.01, 0.3, 97)).epsilon(1e-7));
}

TEST_CASE("tilted pair in the unit-area disk against a polar midpoint rule") {
    const auto disk = ConvexBody::unit_area_disk();
    const double radius = 1 / std::sqrt(kPi);
    const Vec2 x{0.05, -0.02}, y{0.056, -0.012};
    for (unsigned m : {1U, 20U, 97U}) {
        const auto q = triangle_area_moment(disk, x, y, m);
        CHECK(q.value == doctest::Approx(disk_moment_polar(radius, x, y, m, 1500, 3000)).epsilon(1e-5));
        CHECK(q.error_estimate <= 1e-6 * q.value);
    }
}

TEST_CASE("expected pair degree exceeds the lower bound") {
    const auto sq = ConvexBody::unit_square();
    const unsigned n = 100;
    const auto q = expected_pair_degree(sq, {0.5, 0.5}, {0.51, 0.5}, n);
    CHECK(q.value >= sq.rho * n * (1 - std::exp(-sq.rho / 2)));
    CHECK(q.value <= n - 2);
}

TEST_CASE("bad inputs") {
    const auto sq = ConvexBody::unit_square();
    CHECK_THROWS_AS(triangle_area_moment(sq, {0.5, 0.5}, {0.5, 0.5}, 3), QuadratureError);
    CHECK_THROWS_AS(expected_pair_degree(sq, {0.5, 0.5}, {0.6, 0.5}, 2), QuadratureError);
    CHECK_THROWS_AS(triangle_area_moment(sq, {0.5, 0.5}, {0.6, 0.5}, 50, 1e-20), QuadratureError);
    CHECK_NOTHROW(triangle_area_moment(sq, {0.5, 0.5}, {0.6, 0.5}, 50, 1e-12));
}
