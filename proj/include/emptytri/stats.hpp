#pragma once

// Estimators and intervals for the Monte Carlo harness.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace emptytri {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Running mean and variance (Welford), fed in a fixed order.
class MeanAccumulator {
public:
    void add(double x) noexcept;
    std::uint64_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }
    /// Sample variance; zero for fewer than two values.
    double variance() const noexcept;
    double standard_error() const noexcept;

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

Interval normal_interval(double mean, double standard_error, double z = kZ95) noexcept;
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95) noexcept;

/// One line of experiment output.
struct EstimateRow {
    std::uint64_t n = 0;
    std::string statistic;
    double mean = 0.0;
    double standard_error = 0.0;
    Interval ci;
    std::uint64_t trials = 0;

    static EstimateRow from_samples(std::uint64_t n, std::string statistic, std::span<const double> samples);
    static EstimateRow from_proportion(std::uint64_t n, std::string statistic, std::uint64_t successes,
                                       std::uint64_t trials);
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double slope_se = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);
/// Least squares y = slope x; r_squared is the centred coefficient of determination.
LinearFit fit_through_origin(std::span<const double> x, std::span<const double> y);

double binomial_pmf(std::uint64_t n, std::uint64_t k, double p);
double poisson_pmf(double mean, std::uint64_t k);

struct ChiSquareResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
};

/// Goodness of fit of observed bin counts against model probabilities. Tail
/// bins are pooled until every expected count is at least `min_expected`.
ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed, std::span<const double> probabilities,
                                double min_expected = 5.0);

}  // namespace emptytri
