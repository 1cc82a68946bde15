#include "emptytri/stats.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace emptytri {

void MeanAccumulator::add(double x) noexcept {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

double MeanAccumulator::variance() const noexcept {
    return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double MeanAccumulator::standard_error() const noexcept {
    return count_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
}

Interval normal_interval(double mean, double standard_error, double z) noexcept {
    return {mean - z * standard_error, mean + z * standard_error};
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) noexcept {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
    // The interval always reaches the boundary when no successes or no failures occur.
    return {successes == 0 ? 0.0 : std::max(0.0, centre - half), successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

EstimateRow EstimateRow::from_samples(std::uint64_t n, std::string statistic, std::span<const double> samples) {
    MeanAccumulator acc;
    for (double x : samples) acc.add(x);
    EstimateRow row{n, std::move(statistic), acc.mean(), acc.standard_error(), {}, acc.count()};
    row.ci = normal_interval(row.mean, row.standard_error);
    return row;
}

EstimateRow EstimateRow::from_proportion(std::uint64_t n, std::string statistic, std::uint64_t successes,
                                         std::uint64_t trials) {
    EstimateRow row{n, std::move(statistic), 0.0, 0.0, {0.0, 1.0}, trials};
    if (trials == 0) return row;
    const double p = static_cast<double>(successes) / static_cast<double>(trials);
    row.mean = p;
    row.standard_error = std::sqrt(p * (1 - p) / static_cast<double>(trials));
    row.ci = wilson_interval(successes, trials);
    return row;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line needs two or more points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("fit_line: x values are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - fit.intercept - fit.slope * x[i];
        ss_res += r * r;
    }
    fit.r_squared = syy == 0 ? 1.0 : 1.0 - ss_res / syy;
    fit.slope_se = x.size() > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
    return fit;
}

LinearFit fit_through_origin(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) throw std::invalid_argument("fit_through_origin needs data");
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    if (sxx == 0) throw std::invalid_argument("fit_through_origin: all x are zero");
    LinearFit fit;
    fit.slope = sxy / sxx;
    const double n = static_cast<double>(x.size());
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - fit.slope * x[i];
        ss_res += r * r;
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    fit.r_squared = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
    fit.slope_se = x.size() > 1 ? std::sqrt(ss_res / (n - 1) / sxx) : 0.0;
    return fit;
}

double binomial_pmf(std::uint64_t n, std::uint64_t k, double p) {
    if (k > n) return 0.0;
    const double nn = static_cast<double>(n), kk = static_cast<double>(k);
    const double log_choose = std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1);
    return std::exp(log_choose + kk * std::log(p) + (nn - kk) * std::log1p(-p));
}

double poisson_pmf(double mean, std::uint64_t k) {
    const double kk = static_cast<double>(k);
    return std::exp(kk * std::log(mean) - mean - std::lgamma(kk + 1));
}

ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed, std::span<const double> probabilities,
                                double min_expected) {
    if (observed.size() != probabilities.size() || observed.empty())
        throw std::invalid_argument("chi_square_test: bin count mismatch");
    const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
    // Pool from the right so sparse tail bins merge into their neighbours.
    std::vector<double> obs, expv;
    double o_acc = 0, e_acc = 0;
    for (std::size_t i = observed.size(); i-- > 0;) {
        o_acc += static_cast<double>(observed[i]);
        e_acc += probabilities[i] * total;
        if (e_acc >= min_expected) {
            obs.push_back(o_acc);
            expv.push_back(e_acc);
            o_acc = e_acc = 0;
        }
    }
    if (e_acc > 0 || o_acc > 0) {
        if (obs.empty()) {
            obs.push_back(o_acc);
            expv.push_back(e_acc);
        } else {
            obs.back() += o_acc;
            expv.back() += e_acc;
        }
    }
    ChiSquareResult res;
    for (std::size_t i = 0; i < obs.size(); ++i) res.statistic += (obs[i] - expv[i]) * (obs[i] - expv[i]) / expv[i];
    res.dof = static_cast<double>(obs.size()) - 1.0;
    if (res.dof < 1) return res;
    boost::math::chi_squared dist(res.dof);
    res.p_value = boost::math::cdf(boost::math::complement(dist, res.statistic));
    return res;
}

}  // namespace emptytri
