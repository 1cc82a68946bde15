#pragma once

// Uniform samples of convex bodies, quantised onto the integer grid, and the
// mesh-1/sqrt(n) square system with its multinomial and Poisson occupancies.

#include <cstdint>
#include <optional>
#include <vector>

#include "emptytri/body.hpp"
#include "emptytri/geometry.hpp"
#include "emptytri/rng.hpp"

namespace emptytri {

enum class PositionPolicy {
    general,   // resample until no three points are collinear
    distinct,  // only duplicates are resampled
};

struct SampleOptions {
    PositionPolicy policy = PositionPolicy::general;
    /// Grid points placed first; they are never resampled.
    std::vector<Point> prefix;
};

/// Power-of-two grid scale that keeps the body's bounding box inside
/// |coordinate| <= 2^30.
Rational grid_scale_for(const ConvexBody& body);

Point quantize(const Vec2& p, const Rational& scale);
Vec2 dequantize(const Point& p, const Rational& scale);

/// One uniform point of the body (real coordinates).
Vec2 uniform_point(const ConvexBody& body, Rng& rng);

/// n independent uniform points in `body`, deterministic in `seed`. Prefix
/// points come first and count towards the total only if n includes them:
/// the result has prefix.size() + n points.
PointSet sample_uniform(const ConvexBody& body, std::size_t n, std::uint64_t seed, const SampleOptions& options = {});

struct GridSquare {
    std::int64_t col = 0;
    std::int64_t row = 0;
    /// Half-open grid-unit bounds [x0, x1) x [y0, y1).
    std::int64_t x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    /// Real bounds [col*mesh, (col+1)*mesh] x [row*mesh, (row+1)*mesh].
    Vec2 lo{0, 0};
    Vec2 hi{0, 0};

    bool contains(const Point& p) const noexcept { return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1; }
};

class SquareGrid {
public:
    double mesh = 0.0;
    Rational scale;
    std::size_t n = 0;
    std::vector<GridSquare> squares;

    /// Index of the chosen square holding p, if any.
    std::optional<std::size_t> locate(const Point& p) const;

private:
    friend SquareGrid build_grid(const ConvexBody& body, std::size_t n);
    std::int64_t min_col_ = 0, min_row_ = 0, cols_ = 0, rows_ = 0;
    std::vector<std::int64_t> cell_to_square_;  // -1 when the cell was not chosen
};

/// The first n/2 mesh squares (row-major from the lowest row) lying inside
/// the body. Throws BodyError for odd n or too few interior squares.
SquareGrid build_grid(const ConvexBody& body, std::size_t n);

struct GridOccupancy {
    std::vector<std::uint32_t> counts;               // N_1 .. N_M
    std::uint64_t remainder = 0;                     // N*
    std::vector<std::vector<std::size_t>> payloads;  // point indices per square
};

GridOccupancy occupancy_from_sample(const PointSet& pts, const SquareGrid& grid);

struct PoissonGridModel {
    std::vector<std::uint32_t> counts;  // P(1) .. P(M)
    std::int64_t remainder = 0;         // P*, no payload
    std::vector<PointSet> payloads;
};

/// Independent Poisson(1) counts per square with uniform payloads, and
/// P* ~ Poisson(n/2). Payload points are distinct and in general position
/// within their square.
PoissonGridModel sample_poisson_grid(const SquareGrid& grid, std::uint64_t seed);

/// Counts only; skips the payload draws.
std::vector<std::uint32_t> sample_poisson_counts(std::size_t squares, std::uint64_t seed);

}  // namespace emptytri
