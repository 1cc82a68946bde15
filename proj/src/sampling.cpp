#include "emptytri/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "emptytri/rng.hpp"

namespace emptytri {

namespace {

struct PointHash {
    std::size_t operator()(const Point& p) const noexcept {
        return static_cast<std::size_t>(mix64(static_cast<std::uint64_t>(p.x) * 0x100000001B3ULL ^
                                              static_cast<std::uint64_t>(p.y)));
    }
};

// Triangle fan of a convex polygon with cumulative areas for area-weighted
// selection.
struct Fan {
    std::vector<std::array<Vec2, 3>> triangles;
    std::vector<double> cumulative;
};

Fan make_fan(const PolygonShape& poly) {
    Fan fan;
    const auto& v = poly.vertices;
    double total = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        std::array<Vec2, 3> t{v[0], v[i], v[i + 1]};
        total += 0.5 * ((t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[1][1] - t[0][1]) * (t[2][0] - t[0][0]));
        fan.triangles.push_back(t);
        fan.cumulative.push_back(total);
    }
    return fan;
}

Vec2 fan_point(const Fan& fan, Rng& rng) {
    const double pick = rng.uniform() * fan.cumulative.back();
    auto it = std::upper_bound(fan.cumulative.begin(), fan.cumulative.end(), pick);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - fan.cumulative.begin()), fan.triangles.size() - 1);
    const auto& t = fan.triangles[idx];
    double u = rng.uniform(), w = rng.uniform();
    if (u + w > 1.0) {
        u = 1.0 - u;
        w = 1.0 - w;
    }
    return {t[0][0] + u * (t[1][0] - t[0][0]) + w * (t[2][0] - t[0][0]),
            t[0][1] + u * (t[1][1] - t[0][1]) + w * (t[2][1] - t[0][1])};
}

Vec2 ellipse_point(const EllipseShape& e, Rng& rng) {
    const double r = std::sqrt(rng.uniform());
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    const double lx = e.semi_axes[0] * r * std::cos(phi);
    const double ly = e.semi_axes[1] * r * std::sin(phi);
    const double c = std::cos(e.rotation), s = std::sin(e.rotation);
    return {e.center[0] + c * lx - s * ly, e.center[1] + s * lx + c * ly};
}

class BodySampler {
public:
    explicit BodySampler(const ConvexBody& body) : body_(body) {
        if (body.is_polygon()) fan_ = make_fan(body.as_polygon());
    }

    Vec2 operator()(Rng& rng) const {
        return body_.is_polygon() ? fan_point(fan_, rng) : ellipse_point(body_.as_ellipse(), rng);
    }

private:
    const ConvexBody& body_;
    Fan fan_;
};

// Draws one grid point whose real position lies in the body.
Point draw_grid_point(const ConvexBody& body, const BodySampler& sampler, const Rational& scale, Rng& rng) {
    for (;;) {
        const auto q = quantize(sampler(rng), scale);
        if (body.contains(dequantize(q, scale), 0.0)) return q;
    }
}

}  // namespace

Rational grid_scale_for(const ConvexBody& body) {
    const auto b = body.bounds();
    const double extent = std::max({std::abs(b.lo[0]), std::abs(b.lo[1]), std::abs(b.hi[0]), std::abs(b.hi[1]), 1e-300});
    int k = 30;
    while (k > 0 && extent * std::ldexp(1.0, k) > std::ldexp(1.0, 30)) --k;
    if (extent * std::ldexp(1.0, k) > std::ldexp(1.0, 30)) throw BodyError("body too large for the coordinate grid");
    return Rational{std::int64_t{1} << k, 1};
}

Point quantize(const Vec2& p, const Rational& scale) {
    const double s = scale.to_double();
    return {std::llround(p[0] * s), std::llround(p[1] * s)};
}

Vec2 dequantize(const Point& p, const Rational& scale) {
    const double s = scale.to_double();
    return {static_cast<double>(p.x) / s, static_cast<double>(p.y) / s};
}

Vec2 uniform_point(const ConvexBody& body, Rng& rng) { return BodySampler(body)(rng); }

PointSet sample_uniform(const ConvexBody& body, std::size_t n, std::uint64_t seed, const SampleOptions& options) {
    const auto scale = grid_scale_for(body);
    const BodySampler sampler(body);
    Rng rng(seed);

    std::vector<Point> pts = options.prefix;
    pts.reserve(options.prefix.size() + n);
    std::unordered_set<Point, PointHash> seen(pts.begin(), pts.end());
    if (seen.size() != pts.size()) throw GeometryError("duplicate prefix point");

    auto fresh = [&] {
        for (;;) {
            const auto q = draw_grid_point(body, sampler, scale, rng);
            if (seen.insert(q).second) return q;
        }
    };
    for (std::size_t i = 0; i < n; ++i) pts.push_back(fresh());

    if (options.policy == PositionPolicy::general) {
        const auto fixed = options.prefix.size();
        for (;;) {
            auto bad = find_collinear_triple(PointSet(pts, scale));
            if (!bad) break;
            const auto newest = (*bad)[2];
            if (newest < fixed) throw GeneralPositionError(*bad);
            seen.erase(pts[newest]);
            pts[newest] = fresh();
        }
    }
    return PointSet(std::move(pts), scale);
}

}  // namespace emptytri
