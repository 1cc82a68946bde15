#include "emptytri/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "emptytri/rng.hpp"

namespace emptytri {

std::optional<std::size_t> SquareGrid::locate(const Point& p) const {
    if (squares.empty()) return std::nullopt;
    const long double cell = static_cast<long double>(mesh) * scale.to_long_double();
    const auto guess_col = static_cast<std::int64_t>(std::floor(static_cast<long double>(p.x) / cell));
    const auto guess_row = static_cast<std::int64_t>(std::floor(static_cast<long double>(p.y) / cell));
    // The guess may be off by one next to a cell edge; the integer bounds decide.
    for (std::int64_t r = guess_row - 1; r <= guess_row + 1; ++r) {
        for (std::int64_t c = guess_col - 1; c <= guess_col + 1; ++c) {
            const auto lc = c - min_col_, lr = r - min_row_;
            if (lc < 0 || lr < 0 || lc >= cols_ || lr >= rows_) continue;
            const auto idx = cell_to_square_[static_cast<std::size_t>(lr * cols_ + lc)];
            if (idx >= 0 && squares[static_cast<std::size_t>(idx)].contains(p)) return static_cast<std::size_t>(idx);
        }
    }
    return std::nullopt;
}

SquareGrid build_grid(const ConvexBody& body, std::size_t n) {
    if (n == 0 || n % 2 != 0) throw BodyError("grid size n must be even and positive, got " + std::to_string(n));
    SquareGrid grid;
    grid.n = n;
    grid.mesh = 1.0 / std::sqrt(static_cast<double>(n));
    grid.scale = grid_scale_for(body);
    const auto b = body.bounds();
    const double h = grid.mesh;
    grid.min_col_ = static_cast<std::int64_t>(std::floor(b.lo[0] / h));
    grid.min_row_ = static_cast<std::int64_t>(std::floor(b.lo[1] / h));
    const auto max_col = static_cast<std::int64_t>(std::ceil(b.hi[0] / h));
    const auto max_row = static_cast<std::int64_t>(std::ceil(b.hi[1] / h));
    grid.cols_ = max_col - grid.min_col_ + 1;
    grid.rows_ = max_row - grid.min_row_ + 1;
    grid.cell_to_square_.assign(static_cast<std::size_t>(grid.cols_ * grid.rows_), -1);

    const long double s = grid.scale.to_long_double();
    auto edge = [&](std::int64_t k) { return static_cast<std::int64_t>(std::ceil(static_cast<long double>(k) * h * s)); };
    const std::size_t wanted = n / 2;
    for (auto row = grid.min_row_; row <= max_row && grid.squares.size() < wanted; ++row) {
        for (auto col = grid.min_col_; col <= max_col && grid.squares.size() < wanted; ++col) {
            const Vec2 lo{col * h, row * h}, hi{(col + 1) * h, (row + 1) * h};
            if (!body.contains(lo) || !body.contains(hi) || !body.contains({lo[0], hi[1]}) ||
                !body.contains({hi[0], lo[1]}))
                continue;
            GridSquare sq{col, row, edge(col), edge(col + 1), edge(row), edge(row + 1), lo, hi};
            grid.cell_to_square_[static_cast<std::size_t>((row - grid.min_row_) * grid.cols_ + (col - grid.min_col_))] =
                static_cast<std::int64_t>(grid.squares.size());
            grid.squares.push_back(sq);
        }
    }
    if (grid.squares.size() < wanted)
        throw BodyError("only " + std::to_string(grid.squares.size()) + " mesh squares fit inside the body, need " +
                        std::to_string(wanted));
    return grid;
}

GridOccupancy occupancy_from_sample(const PointSet& pts, const SquareGrid& grid) {
    if (!(pts.scale() == grid.scale)) throw GeometryError("point set and grid use different scales");
    GridOccupancy occ;
    occ.counts.assign(grid.squares.size(), 0);
    occ.payloads.resize(grid.squares.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (auto sq = grid.locate(pts[i])) {
            ++occ.counts[*sq];
            occ.payloads[*sq].push_back(i);
        } else {
            ++occ.remainder;
        }
    }
    return occ;
}

std::vector<std::uint32_t> sample_poisson_counts(std::size_t squares, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::uint32_t> counts(squares);
    for (auto& c : counts) c = static_cast<std::uint32_t>(rng.poisson(1.0));
    return counts;
}

PoissonGridModel sample_poisson_grid(const SquareGrid& grid, std::uint64_t seed) {
    if (grid.squares.empty()) throw BodyError("Poisson grid needs at least one square");
    PoissonGridModel model;
    Rng rng(seed);
    const auto m = grid.squares.size();
    model.counts.resize(m);
    for (auto& c : model.counts) c = static_cast<std::uint32_t>(rng.poisson(1.0));
    model.remainder = rng.poisson(static_cast<double>(grid.n) / 2.0);
    model.payloads.reserve(m);
    const double s = grid.scale.to_double();
    for (std::size_t j = 0; j < m; ++j) {
        const auto& sq = grid.squares[j];
        std::vector<Point> pts;
        while (pts.size() < model.counts[j]) {
            const Vec2 real{sq.lo[0] + rng.uniform() * (sq.hi[0] - sq.lo[0]), sq.lo[1] + rng.uniform() * (sq.hi[1] - sq.lo[1])};
            const Point q{static_cast<std::int64_t>(std::floor(real[0] * s)), static_cast<std::int64_t>(std::floor(real[1] * s))};
            if (!sq.contains(q) || std::find(pts.begin(), pts.end(), q) != pts.end()) continue;
            bool collinear = false;
            for (std::size_t a = 0; a < pts.size() && !collinear; ++a)
                for (std::size_t b = a + 1; b < pts.size() && !collinear; ++b)
                    collinear = orientation(pts[a], pts[b], q) == 0;
            if (!collinear) pts.push_back(q);
        }
        model.payloads.emplace_back(std::move(pts), grid.scale);
    }
    return model;
}

}  // namespace emptytri
