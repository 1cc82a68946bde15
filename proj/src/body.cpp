#include "emptytri/body.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

namespace emptytri {

namespace {

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) noexcept {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double signed_area(const std::vector<Vec2>& v) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        s += a[0] * b[1] - a[1] * b[0];
    }
    return 0.5 * s;
}

// Signed distance from p to the supporting line of edge a->b, positive on
// the interior side of a counterclockwise polygon.
double edge_distance(const Vec2& a, const Vec2& b, const Vec2& p) noexcept {
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    return cross2(a, b, p) / len;
}

double boundary_distance(const PolygonShape& poly, const Vec2& p) noexcept {
    double d = std::numeric_limits<double>::infinity();
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) d = std::min(d, edge_distance(v[i], v[(i + 1) % v.size()], p));
    return d;
}

struct Moments {
    double area;
    Vec2 centroid;
    std::array<double, 3> cov;  // xx, xy, yy
};

Moments polygon_moments(const PolygonShape& poly) {
    const auto& v = poly.vertices;
    double area = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    // Fan from v[0]; for a triangle, the integral of x x^T equals
    // (A / 12) (sum_i v_i v_i^T + s s^T) with s the vertex sum.
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const std::array<Vec2, 3> t{v[0], v[i], v[i + 1]};
        const double a = 0.5 * cross2(t[0], t[1], t[2]);
        const Vec2 s{t[0][0] + t[1][0] + t[2][0], t[0][1] + t[1][1] + t[2][1]};
        area += a;
        sx += a * s[0] / 3.0;
        sy += a * s[1] / 3.0;
        double xx = s[0] * s[0], xy = s[0] * s[1], yy = s[1] * s[1];
        for (const auto& q : t) {
            xx += q[0] * q[0];
            xy += q[0] * q[1];
            yy += q[1] * q[1];
        }
        sxx += a / 12.0 * xx;
        sxy += a / 12.0 * xy;
        syy += a / 12.0 * yy;
    }
    const Vec2 c{sx / area, sy / area};
    return {area, c, {sxx / area - c[0] * c[0], sxy / area - c[0] * c[1], syy / area - c[1] * c[1]}};
}

}  // namespace

double standard_inner_radius() noexcept { return std::pow(27.0, -0.25); }

ConvexBody::ConvexBody(std::variant<PolygonShape, EllipseShape> shape) : shape_(std::move(shape)) {
    if (auto* poly = std::get_if<PolygonShape>(&shape_)) {
        area_ = signed_area(poly->vertices);
    } else {
        const auto& e = std::get<EllipseShape>(shape_);
        area_ = std::numbers::pi * e.semi_axes[0] * e.semi_axes[1];
    }
}

ConvexBody ConvexBody::polygon(std::vector<Vec2> vertices) {
    if (vertices.size() < 3) throw BodyError("polygon needs at least three vertices");
    for (const auto& v : vertices)
        if (!std::isfinite(v[0]) || !std::isfinite(v[1])) throw BodyError("polygon vertex is not finite");
    const double a = signed_area(vertices);
    if (!(std::abs(a) > 0.0)) throw BodyError("degenerate polygon (zero area)");
    if (a < 0) std::reverse(vertices.begin(), vertices.end());
    const auto n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = vertices[i];
        const auto& q = vertices[(i + 1) % n];
        const auto& r = vertices[(i + 2) % n];
        if (!(cross2(p, q, r) > 0.0)) throw BodyError("polygon is not strictly convex at vertex " + std::to_string((i + 1) % n));
    }
    // A strictly convex turn at every vertex still admits a star polygon;
    // its total turning exceeds one revolution.
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = vertices[i];
        const auto& q = vertices[(i + 1) % n];
        const auto& r = vertices[(i + 2) % n];
        const double a1 = std::atan2(q[1] - p[1], q[0] - p[0]);
        const double a2 = std::atan2(r[1] - q[1], r[0] - q[0]);
        double d = a2 - a1;
        while (d <= 0) d += 2 * std::numbers::pi;
        turning += d;
    }
    if (turning > 2 * std::numbers::pi + 1e-9) throw BodyError("polygon is self-intersecting");
    return ConvexBody(PolygonShape{std::move(vertices)});
}

ConvexBody ConvexBody::ellipse(Vec2 center, Vec2 semi_axes, double rotation) {
    if (!(semi_axes[0] > 0.0) || !(semi_axes[1] > 0.0) || !std::isfinite(semi_axes[0]) ||
        !std::isfinite(semi_axes[1]))
        throw BodyError("ellipse semi-axes must be positive");
    return ConvexBody(EllipseShape{center, semi_axes, rotation});
}

ConvexBody ConvexBody::unit_square() {
    auto body = polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    body.inscribed_radius = 0.5;
    body.circumscribed_radius = std::sqrt(0.5);
    body.rho = 0.25;
    body.inner_center = {0.5, 0.5};
    body.normalized = true;
    return body;
}

ConvexBody ConvexBody::unit_area_disk() { return normalize_body(ellipse({0, 0}, {1, 1})).first; }

BoundingBox ConvexBody::bounds() const noexcept {
    if (auto* poly = std::get_if<PolygonShape>(&shape_)) {
        BoundingBox b{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
                      {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
        for (const auto& v : poly->vertices) {
            b.lo = {std::min(b.lo[0], v[0]), std::min(b.lo[1], v[1])};
            b.hi = {std::max(b.hi[0], v[0]), std::max(b.hi[1], v[1])};
        }
        return b;
    }
    const auto& e = std::get<EllipseShape>(shape_);
    const double c = std::cos(e.rotation), s = std::sin(e.rotation);
    const double hx = std::hypot(e.semi_axes[0] * c, e.semi_axes[1] * s);
    const double hy = std::hypot(e.semi_axes[0] * s, e.semi_axes[1] * c);
    return {{e.center[0] - hx, e.center[1] - hy}, {e.center[0] + hx, e.center[1] + hy}};
}

bool ConvexBody::contains(const Vec2& p, double tol) const noexcept {
    if (auto* poly = std::get_if<PolygonShape>(&shape_)) {
        const auto& v = poly->vertices;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (edge_distance(v[i], v[(i + 1) % v.size()], p) < -tol) return false;
        return true;
    }
    const auto& e = std::get<EllipseShape>(shape_);
    const double c = std::cos(e.rotation), s = std::sin(e.rotation);
    const double dx = p[0] - e.center[0], dy = p[1] - e.center[1];
    const double u = (c * dx + s * dy) / e.semi_axes[0];
    const double w = (-s * dx + c * dy) / e.semi_axes[1];
    return u * u + w * w <= 1.0 + tol;
}

std::optional<std::pair<double, double>> ConvexBody::vertical_chord(double x) const noexcept {
    if (auto* poly = std::get_if<PolygonShape>(&shape_)) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        const auto& v = poly->vertices;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto& a = v[i];
            const auto& b = v[(i + 1) % v.size()];
            const double x0 = std::min(a[0], b[0]), x1 = std::max(a[0], b[0]);
            if (x < x0 || x > x1) continue;
            if (x1 == x0) {
                lo = std::min({lo, a[1], b[1]});
                hi = std::max({hi, a[1], b[1]});
                continue;
            }
            const double y = a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0]);
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
        if (lo > hi) return std::nullopt;
        return std::pair{lo, hi};
    }
    // Solve the ellipse quadratic in y for fixed x.
    const auto& e = std::get<EllipseShape>(shape_);
    const double c = std::cos(e.rotation), s = std::sin(e.rotation);
    const double ia = 1.0 / (e.semi_axes[0] * e.semi_axes[0]), ib = 1.0 / (e.semi_axes[1] * e.semi_axes[1]);
    const double A = c * c * ia + s * s * ib;
    const double B = 2 * c * s * (ia - ib);
    const double C = s * s * ia + c * c * ib;
    const double dx = x - e.center[0];
    // A dx^2 + B dx dy + C dy^2 = 1
    const double qa = C, qb = B * dx, qc = A * dx * dx - 1.0;
    const double disc = qb * qb - 4 * qa * qc;
    if (disc < 0) return std::nullopt;
    const double r = std::sqrt(disc);
    return std::pair{e.center[1] + (-qb - r) / (2 * qa), e.center[1] + (-qb + r) / (2 * qa)};
}

ConvexBody ConvexBody::transformed(const RealAffineMap& map) const {
    if (auto* poly = std::get_if<PolygonShape>(&shape_)) {
        std::vector<Vec2> out;
        out.reserve(poly->vertices.size());
        for (const auto& v : poly->vertices) out.push_back(map.apply(v));
        return polygon(std::move(out));
    }
    throw BodyError("general affine images of ellipses are not supported");
}

nlohmann::json ConvexBody::to_json() const {
    nlohmann::json j;
    if (auto* poly = std::get_if<PolygonShape>(&shape_)) {
        j["type"] = "polygon";
        j["vertices"] = nlohmann::json::array();
        for (const auto& v : poly->vertices) j["vertices"].push_back({v[0], v[1]});
    } else {
        const auto& e = std::get<EllipseShape>(shape_);
        j["type"] = "ellipse";
        j["center"] = {e.center[0], e.center[1]};
        j["semi_axes"] = {e.semi_axes[0], e.semi_axes[1]};
        j["rotation"] = e.rotation;
    }
    return j;
}

ConvexBody ConvexBody::from_json(const nlohmann::json& j) {
    try {
        const auto type = j.at("type").get<std::string>();
        if (type == "polygon") {
            std::vector<Vec2> v;
            for (const auto& p : j.at("vertices")) v.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            return polygon(std::move(v));
        }
        if (type == "ellipse") {
            const auto& c = j.at("center");
            const auto& a = j.at("semi_axes");
            return ellipse({c.at(0).get<double>(), c.at(1).get<double>()}, {a.at(0).get<double>(), a.at(1).get<double>()},
                           j.value("rotation", 0.0));
        }
        throw BodyError("unknown body type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw BodyError(std::string("malformed body description: ") + e.what());
    }
}

std::pair<Vec2, double> polygon_inscribed_disk(const PolygonShape& poly, double tolerance) {
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi{-lo[0], -lo[1]};
    for (const auto& v : poly.vertices) {
        lo = {std::min(lo[0], v[0]), std::min(lo[1], v[1])};
        hi = {std::max(hi[0], v[0]), std::max(hi[1], v[1])};
    }
    // The distance to the boundary is concave on a convex polygon, so a grid
    // search that repeatedly zooms in on the best node converges.
    constexpr int kNodes = 64;
    Vec2 best{0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])};
    double best_value = boundary_distance(poly, best);
    Vec2 half{0.5 * (hi[0] - lo[0]), 0.5 * (hi[1] - lo[1])};
    Vec2 centre = best;
    while (std::max(half[0], half[1]) * 2.0 / kNodes > tolerance * 1e-2) {
        for (int a = 0; a <= kNodes; ++a)
            for (int b = 0; b <= kNodes; ++b) {
                const Vec2 p{centre[0] - half[0] + 2.0 * half[0] * a / kNodes,
                             centre[1] - half[1] + 2.0 * half[1] * b / kNodes};
                const double v = boundary_distance(poly, p);
                if (v > best_value) {
                    best_value = v;
                    best = p;
                }
            }
        centre = best;
        half = {half[0] * 4.0 / kNodes, half[1] * 4.0 / kNodes};
    }
    return {best, best_value};
}

std::pair<ConvexBody, RealAffineMap> normalize_body(const ConvexBody& body) {
    if (!(body.area() > 0.0)) throw BodyError("degenerate body");
    if (!body.is_polygon()) {
        const auto& e = body.as_ellipse();
        const double radius = 1.0 / std::sqrt(std::numbers::pi);
        const double c = std::cos(e.rotation), s = std::sin(e.rotation);
        // Undo the translation and rotation, then stretch each axis to radius.
        const double kx = radius / e.semi_axes[0], ky = radius / e.semi_axes[1];
        RealAffineMap map{{kx * c, kx * s, -ky * s, ky * c}, {0.0, 0.0}};
        const auto shifted = map.apply(e.center);
        map.t = {-shifted[0], -shifted[1]};
        auto disk = ConvexBody::ellipse({0.0, 0.0}, {radius, radius}, 0.0);
        disk.inscribed_radius = radius;
        disk.circumscribed_radius = radius;
        disk.rho = standard_inner_radius() / 2.0;
        disk.inner_center = {0.0, 0.0};
        disk.normalized = true;
        return {std::move(disk), map};
    }

    const auto mom = polygon_moments(body.as_polygon());
    // Symmetric square root of the covariance, then its inverse.
    const double sxx = mom.cov[0], sxy = mom.cov[1], syy = mom.cov[2];
    const double det = sxx * syy - sxy * sxy;
    if (!(det > 0.0)) throw BodyError("degenerate polygon covariance");
    const double sd = std::sqrt(det);
    const double tn = std::sqrt(sxx + syy + 2.0 * sd);
    const double rxx = (sxx + sd) / tn, rxy = sxy / tn, ryy = (syy + sd) / tn;
    const double rdet = rxx * ryy - rxy * rxy;
    std::array<double, 4> w{ryy / rdet, -rxy / rdet, -rxy / rdet, rxx / rdet};
    const double wdet = w[0] * w[3] - w[1] * w[2];
    const double k = 1.0 / std::sqrt(mom.area * wdet);
    for (auto& x : w) x *= k;
    // Snap round-off so already-isotropic inputs map by the exact identity.
    for (auto& x : w) {
        const double r = std::round(x);
        if (std::abs(x - r) < 1e-12) x = r;
    }
    const auto& c = mom.centroid;
    RealAffineMap map{w, {c[0] - (w[0] * c[0] + w[1] * c[1]), c[1] - (w[2] * c[0] + w[3] * c[1])}};
    if (w == std::array<double, 4>{1.0, 0.0, 0.0, 1.0}) map.t = {0.0, 0.0};

    auto out = body.transformed(map);
    const auto [centre, radius] = polygon_inscribed_disk(out.as_polygon());
    out.inner_center = centre;
    out.inscribed_radius = radius;
    out.rho = radius / 2.0;
    double far = 0.0;
    for (const auto& v : out.as_polygon().vertices) far = std::max(far, std::hypot(v[0] - centre[0], v[1] - centre[1]));
    out.circumscribed_radius = far;
    out.normalized = true;
    return {std::move(out), map};
}

ConvexBody read_body_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BodyError("cannot open body file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw BodyError("body file " + path + ": " + e.what());
    }
    return ConvexBody::from_json(j);
}

ConvexBody resolve_body(const std::string& name_or_path) {
    if (name_or_path == "square") return ConvexBody::unit_square();
    if (name_or_path == "disk") return ConvexBody::unit_area_disk();
    if (name_or_path == "triangle") return normalize_body(ConvexBody::polygon({{0, 0}, {1, 0}, {0, 1}})).first;
    return normalize_body(read_body_file(name_or_path)).first;
}

}  // namespace emptytri
