#pragma once

// Convex sampling domains and their normalisation to unit area.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace emptytri {

using Vec2 = std::array<double, 2>;

class BodyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PolygonShape {
    std::vector<Vec2> vertices;  // strictly convex, counterclockwise
};

struct EllipseShape {
    Vec2 center{0.0, 0.0};
    Vec2 semi_axes{1.0, 1.0};
    double rotation = 0.0;  // radians
};

/// Real affine map u -> M u + t.
struct RealAffineMap {
    std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};  // row-major
    Vec2 t{0.0, 0.0};

    Vec2 apply(const Vec2& u) const noexcept {
        return {m[0] * u[0] + m[1] * u[1] + t[0], m[2] * u[0] + m[3] * u[1] + t[1]};
    }
    double det() const noexcept { return m[0] * m[3] - m[1] * m[2]; }
};

struct BoundingBox {
    Vec2 lo;
    Vec2 hi;
};

class ConvexBody {
public:
    /// Accepts either orientation; clockwise input is reversed. Throws
    /// BodyError unless the vertices form a strictly convex polygon.
    static ConvexBody polygon(std::vector<Vec2> vertices);
    static ConvexBody ellipse(Vec2 center, Vec2 semi_axes, double rotation = 0.0);

    /// [0,1]^2, already in normalised form.
    static ConvexBody unit_square();
    /// Disk of area one centred at the origin, already normalised.
    static ConvexBody unit_area_disk();

    static ConvexBody from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    const std::variant<PolygonShape, EllipseShape>& shape() const noexcept { return shape_; }
    bool is_polygon() const noexcept { return std::holds_alternative<PolygonShape>(shape_); }
    const PolygonShape& as_polygon() const { return std::get<PolygonShape>(shape_); }
    const EllipseShape& as_ellipse() const { return std::get<EllipseShape>(shape_); }

    double area() const noexcept { return area_; }
    BoundingBox bounds() const noexcept;

    /// Closed containment with a relative slack `tol`.
    bool contains(const Vec2& p, double tol = 1e-12) const noexcept;

    /// Intersection of the vertical line x = `x` with the body.
    std::optional<std::pair<double, double>> vertical_chord(double x) const noexcept;

    ConvexBody transformed(const RealAffineMap& map) const;

    /// Radii recorded by normalisation: a disk of `inscribed_radius` around
    /// `inner_center` lies in the body, the body lies in the disk of
    /// `circumscribed_radius` around the same centre, and `rho` is the
    /// working radius (half an inscribed radius).
    double inscribed_radius = 0.0;
    double circumscribed_radius = 0.0;
    double rho = 0.0;
    Vec2 inner_center{0.0, 0.0};
    bool normalized = false;

private:
    explicit ConvexBody(std::variant<PolygonShape, EllipseShape> shape);

    std::variant<PolygonShape, EllipseShape> shape_;
    double area_ = 0.0;
};

/// Standard-position inner radius for area-one bodies: 27^(-1/4).
double standard_inner_radius() noexcept;

/// Maps a body to area one. Ellipses become the disk of radius 1/sqrt(pi)
/// at the origin. Polygons are whitened about their centroid (covariance
/// made isotropic, centroid fixed) and scaled to unit area.
std::pair<ConvexBody, RealAffineMap> normalize_body(const ConvexBody& body);

/// Largest disk found by refining a grid search over the distance to the
/// boundary; returns (centre, radius).
std::pair<Vec2, double> polygon_inscribed_disk(const PolygonShape& poly, double tolerance = 1e-6);

ConvexBody read_body_file(const std::string& path);

/// "square", "disk", "triangle", or a path to a JSON body description.
ConvexBody resolve_body(const std::string& name_or_path);

}  // namespace emptytri
