#pragma once

// Numerical side of the pair-degree expectation: integrals of powers of
// (1 - area of triangle x y u) over a convex body.

#include <stdexcept>

#include "emptytri/body.hpp"

namespace emptytri {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Integral over the body of (1 - A(x, y, u))^exponent du, where A is the
/// area of the triangle x y u. Nested adaptive Gauss-Kronrod over vertical
/// chords, split wherever the integrand or the chord bounds have a kink.
/// Exponent 0 returns the body area. Throws QuadratureError when the
/// estimated relative error exceeds `rel_tol` or `rel_tol` < 1e-12.
QuadratureResult triangle_area_moment(const ConvexBody& body, const Vec2& x, const Vec2& y, unsigned exponent,
                                      double rel_tol = 1e-6);

/// Expected degree of the pair {x, y} among n - 2 further uniform points of a
/// unit-area body: (n - 2) times the moment with exponent n - 3.
QuadratureResult expected_pair_degree(const ConvexBody& body, const Vec2& x, const Vec2& y, unsigned n,
                                      double rel_tol = 1e-6);

}  // namespace emptytri
