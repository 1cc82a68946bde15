#pragma once

// Monte Carlo harness. Every trial draws from a seed derived from
// (base seed, experiment, n, trial), trials run on a worker pool, and all
// reductions happen afterwards in trial order, so output is bit-identical
// for any thread count.

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emptytri/body.hpp"
#include "emptytri/engine.hpp"
#include "emptytri/geometry.hpp"
#include "emptytri/stats.hpp"
#include "json.hpp"

namespace emptytri {

inline constexpr std::string_view kToolVersion = "emptytri 0.1.0";

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Counts checks of the engine invariants on every report the harness
/// produces. Thread-safe; a process-wide instance collects everything.
struct InvariantAudit {
    std::atomic<std::uint64_t> reports{0};
    std::atomic<std::uint64_t> handshake_violations{0};
    std::atomic<std::uint64_t> degree_bound_violations{0};
    std::atomic<std::uint64_t> lower_bound_violations{0};
    std::atomic<std::uint64_t> near_pair_checks{0};
    std::atomic<std::uint64_t> near_pair_violations{0};
    std::atomic<std::uint64_t> oracle_checks{0};
    std::atomic<std::uint64_t> oracle_mismatches{0};

    /// Sum of degrees is 3f, every degree is at most n - 2, f >= n^2 - 5n for n >= 5.
    void check(const EmptyTriangleReport& report);
    /// Thresholded degree sum is at most N_T times deg_max.
    void check_near_pairs(const EmptyTriangleReport& report, const NearPairStat& near);
    void check_oracle(const EmptyTriangleReport& fast, const EmptyTriangleReport& oracle);

    std::uint64_t violations() const noexcept;
    nlohmann::json to_json() const;
    void merge(const nlohmann::json& j);
};

InvariantAudit& global_audit();

struct ExperimentConfig {
    std::string body_name = "square";
    ConvexBody body = ConvexBody::unit_square();
    std::vector<std::size_t> n_grid{100};
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    double t_alpha = 2.0;
    std::size_t L = 6;
    unsigned threads = 1;
    /// Cross-check every report with the brute-force oracle when n permits.
    bool oracle = false;
    /// Verify general position of every sample by brute force.
    bool check_general_position = false;

    /// Occupancy event for the transfer experiment: "always", "max-ge:m",
    /// "first-eq:k" or "exact-ge:k:j" (at least j squares with exactly k points).
    std::string event = "max-ge:5";
    /// Target for the order-type search: "convex:k" or a label "k:+-...".
    std::string order_type = "convex:5";
    /// Fixed pair for the lemma-ad degree comparison, in body coordinates.
    Vec2 x{0.5, 0.5};
    Vec2 y{0.51, 0.5};
    std::size_t iterations = 10000;

    InvariantAudit* audit = &global_audit();

    /// Throws ConfigError unless trials >= 1 and n_grid is strictly increasing.
    void validate() const;
    nlohmann::json to_json() const;
    /// Reads the keys written by to_json; missing keys keep their defaults.
    static ExperimentConfig from_json(const nlohmann::json& j);
};

struct ExperimentResult {
    std::string name;
    std::vector<EstimateRow> rows;
    nlohmann::json summary = nlohmann::json::object();

    const EstimateRow* find(std::uint64_t n, std::string_view statistic) const;
};

ExperimentResult exp_deg_growth(const ExperimentConfig& cfg);
ExperimentResult exp_valtr(const ExperimentConfig& cfg);
ExperimentResult exp_ntpairs(const ExperimentConfig& cfg);
ExperimentResult exp_tail(const ExperimentConfig& cfg);
ExperimentResult exp_lemma_ad(const ExperimentConfig& cfg);
ExperimentResult exp_transfer(const ExperimentConfig& cfg);
ExperimentResult exp_BL(const ExperimentConfig& cfg);
ExperimentResult exp_ordertype_search(const ExperimentConfig& cfg);
ExperimentResult exp_minimize_f(const ExperimentConfig& cfg);

const std::vector<std::string>& experiment_names();
/// Dispatches by CLI name ("deg-growth", "valtr", ...). Throws ConfigError
/// for unknown names.
ExperimentResult run_experiment(std::string_view name, const ExperimentConfig& cfg);

/// Header lines (without the leading '#') recording version, name, seed and
/// the resolved configuration.
std::vector<std::string> provenance_header(std::string_view name, const ExperimentConfig& cfg);

/// "#"-prefixed header, then n,statistic,mean,standard_error,ci_lo,ci_hi,trials.
void write_csv(std::ostream& out, const ExperimentResult& result, const std::vector<std::string>& header);
nlohmann::json summary_json(const ExperimentResult& result, const ExperimentConfig& cfg);

/// Shortest round-trip decimal form; "nan" and "inf" spelled out.
std::string format_double(double v);

struct MinimizeResult {
    PointSet best;
    std::uint64_t f_initial = 0;
    std::uint64_t f_best = 0;
    /// (iteration, f) at the start and after every strict improvement.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> trace;
};

/// Hill climbing on f over integer sets in a box of side 4n^2: move one
/// random point by a small random offset, keep the move when the set stays
/// in general position and f does not increase.
MinimizeResult minimize_f(std::size_t n, std::size_t iterations, std::uint64_t seed);

}  // namespace emptytri
