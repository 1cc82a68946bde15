#pragma once

// Chirotopes and canonical order-type labels of small point configurations.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "emptytri/geometry.hpp"
#include "emptytri/sampling.hpp"

namespace emptytri {

/// Largest configuration canonical_label accepts (the search is k!).
inline constexpr std::size_t kMaxLabelPoints = 9;

class OrderTypeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Number of triples h < i < j on k points.
constexpr std::size_t triple_count(std::size_t k) noexcept { return k < 3 ? 0 : k * (k - 1) * (k - 2) / 6; }

/// Triple orientation signs of a general-position set, one entry per h < i < j
/// in lexicographic order.
struct Chirotope {
    std::size_t k = 0;
    std::vector<std::int8_t> signs;

    /// Sign of the ordered triple (a, b, c) of distinct indices, in any order.
    int sign(std::size_t a, std::size_t b, std::size_t c) const;

    friend bool operator==(const Chirotope&, const Chirotope&) = default;
};

/// Canonical representative of an order type: the least sign vector over
/// every relabelling, with -1 ordered before +1. Mirror images stay distinct
/// unless some relabelling identifies them.
struct OrderTypeLabel {
    std::size_t k = 0;
    std::vector<std::int8_t> signs;

    /// "k:" followed by one '+' or '-' per triple, e.g. "4:++-+".
    std::string str() const;
    static OrderTypeLabel parse(std::string_view text);

    friend bool operator==(const OrderTypeLabel&, const OrderTypeLabel&) = default;
    friend auto operator<=>(const OrderTypeLabel&, const OrderTypeLabel&) = default;
};

/// Throws GeneralPositionError on a collinear triple.
Chirotope chirotope(const PointSet& pts);

/// Throws OrderTypeError when more than kMaxLabelPoints points are given.
OrderTypeLabel canonical_label(const Chirotope& chi);
OrderTypeLabel canonical_label(const PointSet& pts);

struct SameTypeResult {
    bool same = false;
    bool size_mismatch = false;
    explicit operator bool() const noexcept { return same; }
};

SameTypeResult same_type(const PointSet& a, const PointSet& b);

/// Every point is a vertex of the convex hull.
bool is_convex_position(const PointSet& pts);

/// Label of k points in convex position.
OrderTypeLabel convex_position_label(std::size_t k);

/// First square (lowest index) whose payload has exactly target.k points of
/// the target type. Labels are only computed for squares of matching size.
std::optional<std::size_t> find_type_in_squares(const PointSet& pts, const GridOccupancy& occupancy,
                                                const OrderTypeLabel& target, unsigned threads = 1);
std::optional<std::size_t> find_type_in_squares(const PoissonGridModel& model, const OrderTypeLabel& target,
                                                unsigned threads = 1);

}  // namespace emptytri
