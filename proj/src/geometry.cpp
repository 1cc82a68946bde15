#include "emptytri/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace emptytri {

namespace {

Triple sorted(Triple t) {
    std::sort(t.begin(), t.end());
    return t;
}

std::string triple_message(const Triple& t) {
    return "collinear triple (" + std::to_string(t[0]) + ", " + std::to_string(t[1]) + ", " +
           std::to_string(t[2]) + ")";
}

struct PointHash {
    std::size_t operator()(const Point& p) const noexcept {
        auto h = static_cast<std::uint64_t>(p.x) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<std::uint64_t>(p.y) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

GeneralPositionError::GeneralPositionError(Triple t)
    : GeometryError(triple_message(sorted(t))), triple_(sorted(t)) {}

Rational Rational::make(std::int64_t num, std::int64_t den) {
    if (den == 0) throw GeometryError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num <= 0) throw GeometryError("scale must be positive");
    auto g = std::gcd(num, den);
    return {num / g, den / g};
}

Rational Rational::parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            auto v = std::stoll(text, &used);
            if (used != text.size()) throw GeometryError("bad rational: " + text);
            return make(v, 1);
        }
        auto num_text = text.substr(0, slash);
        auto den_text = text.substr(slash + 1);
        auto num = std::stoll(num_text, &used);
        if (used != num_text.size()) throw GeometryError("bad rational: " + text);
        auto den = std::stoll(den_text, &used);
        if (used != den_text.size()) throw GeometryError("bad rational: " + text);
        return make(num, den);
    } catch (const std::logic_error&) {
        throw GeometryError("bad rational: " + text);
    }
}

std::string Rational::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

bool coordinate_in_range(std::int64_t v) noexcept { return v > -kCoordLimit && v < kCoordLimit; }

PointSet::PointSet(std::vector<Point> points, Rational scale) : points_(std::move(points)), scale_(scale) {
    if (scale_.num <= 0 || scale_.den <= 0) throw GeometryError("scale must be positive");
    std::unordered_set<Point, PointHash> seen;
    seen.reserve(points_.size() * 2);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!coordinate_in_range(p.x) || !coordinate_in_range(p.y))
            throw GeometryError("point " + std::to_string(i) + " " + to_string(p) + " outside the 2^31 grid");
        if (!seen.insert(p).second)
            throw GeometryError("duplicate point " + to_string(p) + " at index " + std::to_string(i));
    }
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
    std::vector<Point> out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(points_.at(i));
    return PointSet(std::move(out), scale_);
}

std::array<double, 2> PointSet::to_real(std::size_t i) const noexcept {
    const double s = scale_.to_double();
    return {static_cast<double>(points_[i].x) / s, static_cast<double>(points_[i].y) / s};
}

wide_int cross(const Point& p, const Point& q, const Point& r) noexcept {
    const wide_int ax = q.x - p.x, ay = q.y - p.y;
    const wide_int bx = r.x - p.x, by = r.y - p.y;
    return ax * by - ay * bx;
}

int orientation(const Point& p, const Point& q, const Point& r) noexcept {
    const auto d = cross(p, q, r);
    return (d > 0) - (d < 0);
}

Containment point_in_triangle(const Point& p, const Point& a, const Point& b, const Point& c) {
    const int abc = orientation(a, b, c);
    if (abc == 0) throw GeometryError("degenerate triangle " + to_string(a) + to_string(b) + to_string(c));
    // Normalise to a counterclockwise triangle.
    const int s1 = orientation(a, b, p) * abc;
    const int s2 = orientation(b, c, p) * abc;
    const int s3 = orientation(c, a, p) * abc;
    if (s1 < 0 || s2 < 0 || s3 < 0) return Containment::exterior;
    if (s1 == 0 || s2 == 0 || s3 == 0) return Containment::boundary;
    return Containment::interior;
}

wide_int squared_distance(const Point& p, const Point& q) noexcept {
    const wide_int dx = p.x - q.x, dy = p.y - q.y;
    return dx * dx + dy * dy;
}

std::optional<Triple> first_collinear_triple(const PointSet& pts) {
    const auto n = pts.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                if (orientation(pts[i], pts[j], pts[k]) == 0) return Triple{i, j, k};
    return std::nullopt;
}

std::optional<Triple> find_collinear_triple(const PointSet& pts) {
    const auto n = pts.size();
    if (n < 3) return std::nullopt;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pts[a] < pts[b]; });

    // Every collinear triple has a lexicographically least member a; the
    // other two lie on one ray from a inside the half-plane of points > a.
    std::vector<std::size_t> fan;
    fan.reserve(n);
    for (std::size_t pos = 0; pos + 2 < n; ++pos) {
        const Point& a = pts[order[pos]];
        fan.assign(order.begin() + static_cast<std::ptrdiff_t>(pos) + 1, order.end());
        std::sort(fan.begin(), fan.end(), [&](auto u, auto v) { return cross(a, pts[u], pts[v]) > 0; });
        for (std::size_t k = 0; k + 1 < fan.size(); ++k)
            if (cross(a, pts[fan[k]], pts[fan[k + 1]]) == 0) return sorted({order[pos], fan[k], fan[k + 1]});
    }
    return std::nullopt;
}

int AffineMap::det_sign() const noexcept {
    const auto d = det_numerator();
    return (d > 0) - (d < 0);
}

PointSet apply_affine(const PointSet& pts, const AffineMap& map) {
    if (map.det_sign() == 0) throw GeometryError("degenerate affine map");
    if (map.den <= 0) throw GeometryError("affine map denominator must be positive");
    std::vector<Point> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
        const wide_int x = static_cast<wide_int>(map.m[0]) * p.x + static_cast<wide_int>(map.m[1]) * p.y + map.t[0];
        const wide_int y = static_cast<wide_int>(map.m[2]) * p.x + static_cast<wide_int>(map.m[3]) * p.y + map.t[1];
        if (x % map.den != 0 || y % map.den != 0)
            throw GeometryError("affine image of " + to_string(p) + " is not an integer point");
        const wide_int xi = x / map.den, yi = y / map.den;
        if (xi <= -kCoordLimit || xi >= kCoordLimit || yi <= -kCoordLimit || yi >= kCoordLimit)
            throw GeometryError("affine image of " + to_string(p) + " overflows the coordinate grid");
        out.push_back({static_cast<std::int64_t>(xi), static_cast<std::int64_t>(yi)});
    }
    return PointSet(std::move(out), pts.scale());
}

std::string to_string(const Point& p) { return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")"; }

std::string to_string(wide_int v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    // Magnitudes here stay far below 2^127, so negation is safe.
    if (neg) v = -v;
    std::string digits;
    while (v > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    if (neg) digits.push_back('-');
    return {digits.rbegin(), digits.rend()};
}

}  // namespace emptytri
