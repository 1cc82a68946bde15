#pragma once

// Empty-triangle statistics: f(X), the pair-degree table, deg X and the
// near-pair count N_T.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "emptytri/geometry.hpp"

namespace emptytri {

inline constexpr std::size_t kMaxEnginePoints = 65535;
inline constexpr std::size_t kDefaultOracleCap = 64;

class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense symmetric table over unordered pairs {i, j}, i != j.
class DegreeTable {
public:
    DegreeTable() = default;
    explicit DegreeTable(std::size_t n);

    std::size_t n() const noexcept { return n_; }
    std::size_t pair_count() const noexcept { return cells_.size(); }

    std::size_t index(std::size_t i, std::size_t j) const noexcept {
        if (i > j) std::swap(i, j);
        return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
    }
    std::uint32_t operator()(std::size_t i, std::size_t j) const noexcept { return cells_[index(i, j)]; }
    std::uint32_t& at(std::size_t i, std::size_t j) noexcept { return cells_[index(i, j)]; }

    std::vector<std::uint32_t>& cells() noexcept { return cells_; }
    const std::vector<std::uint32_t>& cells() const noexcept { return cells_; }

    friend bool operator==(const DegreeTable&, const DegreeTable&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint32_t> cells_;
};

struct EmptyTriangleReport {
    std::size_t n = 0;
    std::uint64_t f = 0;
    DegreeTable degree;
    std::uint32_t deg_max = 0;
    std::array<std::size_t, 2> argmax_pair{0, 0};

    std::uint64_t degree_sum() const noexcept;
    /// histogram[d] = number of pairs with degree d, for d = 0..deg_max.
    std::vector<std::uint64_t> degree_histogram() const;

    friend bool operator==(const EmptyTriangleReport&, const EmptyTriangleReport&) = default;
};

struct EngineOptions {
    unsigned threads = 1;
};

using TriangleConsumer = std::function<void(const Triple&)>;

/// Calls `consumer` once per empty triangle (indices ascending) and returns
/// f(X). Throws GeneralPositionError on the first collinear triple seen.
std::uint64_t enumerate_empty_triangles(const PointSet& pts, const TriangleConsumer& consumer);

/// O(n^4) reference used as a correctness oracle.
EmptyTriangleReport brute_force_empty_triangles(const PointSet& pts, std::size_t cap = kDefaultOracleCap);

/// Full report from the angular-sweep enumerator. deg_max ties resolve to
/// the lexicographically smallest pair.
EmptyTriangleReport degree_report(const PointSet& pts, EngineOptions options = {});

/// deg(x_i, x_j) by a direct O(n^2) scan.
std::uint32_t pair_degree(const PointSet& pts, std::size_t i, std::size_t j);

struct NearPairStat {
    /// Threshold on squared grid distance: a pair counts iff d^2 <= threshold_sq.
    wide_int threshold_sq = 0;
    /// (T * scale)^2 before rounding down; zero when built from a grid threshold.
    long double requested_sq = 0;
    std::uint64_t count = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// N_T for T in body units; the squared threshold is rounded down to whole
/// squared grid units.
NearPairStat near_pairs(const PointSet& pts, double T, bool keep_pairs = false);
NearPairStat near_pairs_grid(const PointSet& pts, wide_int threshold_sq, bool keep_pairs = false);
/// Plain all-pairs scan.
std::uint64_t near_pairs_scan(const PointSet& pts, wide_int threshold_sq);

wide_int threshold_from_length(const PointSet& pts, double T);

/// Sum of deg(x, y) over pairs with |x - y| <= T, each degree by pair_degree.
std::uint64_t thresholded_degree_sum(const PointSet& pts, double T);
/// Same sum read from an existing report and a near-pair list.
std::uint64_t thresholded_degree_sum(const EmptyTriangleReport& report, const NearPairStat& near);

}  // namespace emptytri
