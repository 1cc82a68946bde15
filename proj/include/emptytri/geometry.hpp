#pragma once

// Exact planar primitives on integer points.
//
// Coordinates live on a grid with |x|, |y| < 2^31, so every orientation
// determinant and squared distance fits in signed 128-bit arithmetic and no
// floating-point tolerance is ever needed in the combinatorial core.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace emptytri {

using wide_int = __int128;

inline constexpr std::int64_t kCoordLimit = std::int64_t{1} << 31;

struct Point {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

/// Index triple i < j < k into a point set.
using Triple = std::array<std::size_t, 3>;

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised whenever a collinear triple shows up where general position is
/// required. Carries the offending indices (sorted ascending).
class GeneralPositionError : public GeometryError {
public:
    explicit GeneralPositionError(Triple t);
    const Triple& triple() const noexcept { return triple_; }

private:
    Triple triple_;
};

/// Positive rational number, kept reduced.
struct Rational {
    std::int64_t num = 1;
    std::int64_t den = 1;

    static Rational make(std::int64_t num, std::int64_t den);
    static Rational parse(const std::string& text);
    double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    long double to_long_double() const noexcept {
        return static_cast<long double>(num) / static_cast<long double>(den);
    }
    std::string str() const;

    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Ordered planar configuration. `scale` is the number of grid units per
/// unit of body length, so a grid point p stands for p / scale.
class PointSet {
public:
    PointSet() = default;
    /// Validates coordinate bounds and distinctness.
    explicit PointSet(std::vector<Point> points, Rational scale = {});

    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }
    std::span<const Point> points() const noexcept { return points_; }
    const Rational& scale() const noexcept { return scale_; }

    auto begin() const noexcept { return points_.begin(); }
    auto end() const noexcept { return points_.end(); }

    /// Subset in the given index order, same scale.
    PointSet subset(std::span<const std::size_t> indices) const;

    /// Real coordinates of point i in body units.
    std::array<double, 2> to_real(std::size_t i) const noexcept;

private:
    std::vector<Point> points_;
    Rational scale_;
};

bool coordinate_in_range(std::int64_t v) noexcept;

/// Sign of (q - p) x (r - p): +1 counterclockwise, -1 clockwise, 0 collinear.
int orientation(const Point& p, const Point& q, const Point& r) noexcept;

/// The raw determinant behind `orientation`.
wide_int cross(const Point& p, const Point& q, const Point& r) noexcept;

enum class Containment { interior, boundary, exterior };

/// Classifies p against the closed triangle abc. Throws GeometryError when
/// a, b, c are collinear.
Containment point_in_triangle(const Point& p, const Point& a, const Point& b, const Point& c);

wide_int squared_distance(const Point& p, const Point& q) noexcept;

/// Brute-force check over all triples; returns the first collinear triple in
/// lexicographic index order, or nullopt.
std::optional<Triple> first_collinear_triple(const PointSet& pts);

inline bool is_general_position(const PointSet& pts) { return !first_collinear_triple(pts).has_value(); }

/// Finds some collinear triple in O(n^2 log n) by angular sorting around
/// every point. Returns nullopt iff the set is in general position.
std::optional<Triple> find_collinear_triple(const PointSet& pts);

/// p -> (M p + t) / den with integer M and t. Rational maps with a common
/// denominator are expressed by `den`; images must land on integers.
struct AffineMap {
    std::array<std::int64_t, 4> m{1, 0, 0, 1};  // row-major [[m0, m1], [m2, m3]]
    std::array<std::int64_t, 2> t{0, 0};
    std::int64_t den = 1;

    static AffineMap identity() { return {}; }
    wide_int det_numerator() const noexcept {
        return static_cast<wide_int>(m[0]) * m[3] - static_cast<wide_int>(m[1]) * m[2];
    }
    int det_sign() const noexcept;
};

/// Image of every point. Throws GeometryError on a degenerate map, a
/// non-integral image, or coordinate overflow.
PointSet apply_affine(const PointSet& pts, const AffineMap& map);

std::string to_string(const Point& p);
std::string to_string(wide_int v);

}  // namespace emptytri
