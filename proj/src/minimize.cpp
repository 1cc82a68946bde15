#include <stdexcept>

#include "emptytri/engine.hpp"
#include "emptytri/experiments.hpp"
#include "emptytri/rng.hpp"

namespace emptytri {

namespace {

// q may join pts (with pts[skip] removed) without breaking general position.
bool fits(const std::vector<Point>& pts, std::size_t skip, const Point& q) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i == skip) continue;
        if (pts[i] == q) return false;
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (j != skip && orientation(pts[i], pts[j], q) == 0) return false;
    }
    return true;
}

std::uint64_t count_f(const std::vector<Point>& pts) { return enumerate_empty_triangles(PointSet(pts), {}); }

}  // namespace

MinimizeResult minimize_f(std::size_t n, std::size_t iterations, std::uint64_t seed) {
    if (n < 5) throw std::invalid_argument("minimize_f needs n >= 5");
    const auto side = static_cast<std::int64_t>(4 * n * n);
    if (side >= kCoordLimit) throw std::invalid_argument("minimize_f: n is too large for the coordinate grid");
    const auto step = static_cast<std::int64_t>(n);
    Rng rng(seed);
    auto coord = [&] { return static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(side))); };

    std::vector<Point> pts;
    while (pts.size() < n) {
        const Point q{coord(), coord()};
        if (fits(pts, pts.size(), q)) pts.push_back(q);
    }

    MinimizeResult res;
    res.f_initial = res.f_best = count_f(pts);
    res.trace.emplace_back(0, res.f_best);
    for (std::size_t it = 1; it <= iterations; ++it) {
        const auto i = static_cast<std::size_t>(rng.below(n));
        const auto dx = static_cast<std::int64_t>(rng.below(2 * step + 1)) - step;
        const auto dy = static_cast<std::int64_t>(rng.below(2 * step + 1)) - step;
        const Point q{pts[i].x + dx, pts[i].y + dy};
        if ((dx == 0 && dy == 0) || q.x < 0 || q.y < 0 || q.x >= side || q.y >= side) continue;
        if (!fits(pts, i, q)) continue;
        const Point old = pts[i];
        pts[i] = q;
        const auto f = count_f(pts);
        if (f > res.f_best) {
            pts[i] = old;
            continue;
        }
        if (f < res.f_best) res.trace.emplace_back(it, f);
        res.f_best = f;
    }
    res.best = PointSet(std::move(pts));
    return res;
}

}  // namespace emptytri
