#include "emptytri/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace emptytri {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr unsigned kMaxDepth = 15;
// Below this the nested rule cannot certify the error in double precision.
constexpr double kMinRelTol = 1e-12;

// x-coordinates where the segment of the line through a and b inside the
// body starts and ends; found by bisection since the body is convex.
std::vector<double> line_exits(const ConvexBody& body, const Vec2& a, const Vec2& b) {
    const Vec2 d{b[0] - a[0], b[1] - a[1]};
    const auto box = body.bounds();
    const double span = std::hypot(box.hi[0] - box.lo[0], box.hi[1] - box.lo[1]);
    const double len = std::hypot(d[0], d[1]);
    auto at = [&](double t) { return Vec2{a[0] + t * d[0], a[1] + t * d[1]}; };
    std::vector<double> xs;
    if (!body.contains(a, 0.0)) return xs;
    for (double dir : {-1.0, 1.0}) {
        double in = 0.0, out = dir * 2 * span / len;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (in + out);
            (body.contains(at(mid), 0.0) ? in : out) = mid;
        }
        xs.push_back(at(in)[0]);
    }
    return xs;
}

}  // namespace

QuadratureResult triangle_area_moment(const ConvexBody& body, const Vec2& x, const Vec2& y, unsigned exponent,
                                      double rel_tol) {
    if (!(rel_tol >= kMinRelTol)) throw QuadratureError("relative tolerance must be at least 1e-12");
    if (exponent == 0) return {body.area(), 0.0};
    const double dx = y[0] - x[0], dy = y[1] - x[1];
    if (dx == 0 && dy == 0) throw QuadratureError("triangle_area_moment needs distinct points x and y");
    const double m = static_cast<double>(exponent);

    // Twice the signed area is dx (v - x1) - dy (u - x0); it vanishes on the
    // line through x and y, where the integrand has a kink.
    auto integrand = [&](double u, double v) {
        const double area = 0.5 * std::abs(dx * (v - x[1]) - dy * (u - x[0]));
        return std::pow(std::max(0.0, 1.0 - area), m);
    };

    const double inner_tol = rel_tol * 1e-2;
    double inner_error = 0.0;
    auto column = [&](double u) {
        const auto chord = body.vertical_chord(u);
        if (!chord || chord->second <= chord->first) return 0.0;
        auto [lo, hi] = *chord;
        auto f = [&](double v) { return integrand(u, v); };
        std::vector<double> cuts{lo};
        if (dx != 0) {
            const double kink = x[1] + dy * (u - x[0]) / dx;
            if (kink > lo && kink < hi) cuts.push_back(kink);
        }
        cuts.push_back(hi);
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double err = 0.0;
            total += GK::integrate(f, cuts[i], cuts[i + 1], kMaxDepth, inner_tol, &err);
            inner_error = std::max(inner_error, err);
        }
        return total;
    };

    const auto box = body.bounds();
    std::vector<double> cuts{box.lo[0], box.hi[0]};
    if (body.is_polygon())
        for (const auto& p : body.as_polygon().vertices) cuts.push_back(p[0]);
    if (dx == 0) cuts.push_back(x[0]);
    for (double c : line_exits(body, x, y)) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [&](double a, double b) { return b - a <= 1e-14 * (box.hi[0] - box.lo[0]); }),
               cuts.end());
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double c) { return c < box.lo[0] || c > box.hi[0]; }),
               cuts.end());

    QuadratureResult res;
    double l1 = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0, piece_l1 = 0.0;
        res.value += GK::integrate(column, cuts[i], cuts[i + 1], kMaxDepth, rel_tol * 1e-1, &err, &piece_l1);
        res.error_estimate += err;
        l1 += piece_l1;
    }
    res.error_estimate += inner_error * (box.hi[0] - box.lo[0]);
    if (!(res.error_estimate <= rel_tol * std::max(l1, std::abs(res.value))))
        throw QuadratureError("quadrature did not reach relative tolerance " + std::to_string(rel_tol) +
                              " (error estimate " + std::to_string(res.error_estimate) + ")");
    return res;
}

QuadratureResult expected_pair_degree(const ConvexBody& body, const Vec2& x, const Vec2& y, unsigned n,
                                      double rel_tol) {
    if (n < 3) throw QuadratureError("expected_pair_degree needs n >= 3");
    auto res = triangle_area_moment(body, x, y, n - 3, rel_tol);
    const double k = static_cast<double>(n - 2);
    return {k * res.value, k * res.error_estimate};
}

}  // namespace emptytri
