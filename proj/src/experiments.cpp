#include "emptytri/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "emptytri/order_types.hpp"
#include "emptytri/parallel.hpp"
#include "emptytri/quadrature.hpp"
#include "emptytri/rng.hpp"
#include "emptytri/sampling.hpp"

namespace emptytri {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Invariant audit

void InvariantAudit::check(const EmptyTriangleReport& r) {
    ++reports;
    if (r.degree_sum() != 3 * r.f) ++handshake_violations;
    const std::uint64_t cap = r.n >= 2 ? r.n - 2 : 0;
    if (r.deg_max > cap || std::any_of(r.degree.cells().begin(), r.degree.cells().end(), [&](auto d) { return d > cap; }))
        ++degree_bound_violations;
    if (r.n >= 5) {
        const auto n = static_cast<std::int64_t>(r.n);
        if (static_cast<std::int64_t>(r.f) < n * n - 5 * n) ++lower_bound_violations;
    }
}

void InvariantAudit::check_near_pairs(const EmptyTriangleReport& r, const NearPairStat& near) {
    ++near_pair_checks;
    const auto lhs = thresholded_degree_sum(r, near);
    if (lhs > near.count * r.deg_max) ++near_pair_violations;
    if (near.count == 0 && lhs != 0) ++near_pair_violations;
}

void InvariantAudit::check_oracle(const EmptyTriangleReport& fast, const EmptyTriangleReport& oracle) {
    ++oracle_checks;
    if (!(fast == oracle)) ++oracle_mismatches;
}

std::uint64_t InvariantAudit::violations() const noexcept {
    return handshake_violations + degree_bound_violations + lower_bound_violations + near_pair_violations +
           oracle_mismatches;
}

json InvariantAudit::to_json() const {
    return {{"reports", reports.load()},
            {"handshake_violations", handshake_violations.load()},
            {"degree_bound_violations", degree_bound_violations.load()},
            {"lower_bound_violations", lower_bound_violations.load()},
            {"near_pair_checks", near_pair_checks.load()},
            {"near_pair_violations", near_pair_violations.load()},
            {"oracle_checks", oracle_checks.load()},
            {"oracle_mismatches", oracle_mismatches.load()}};
}

void InvariantAudit::merge(const json& j) {
    reports += j.value("reports", std::uint64_t{0});
    handshake_violations += j.value("handshake_violations", std::uint64_t{0});
    degree_bound_violations += j.value("degree_bound_violations", std::uint64_t{0});
    lower_bound_violations += j.value("lower_bound_violations", std::uint64_t{0});
    near_pair_checks += j.value("near_pair_checks", std::uint64_t{0});
    near_pair_violations += j.value("near_pair_violations", std::uint64_t{0});
    oracle_checks += j.value("oracle_checks", std::uint64_t{0});
    oracle_mismatches += j.value("oracle_mismatches", std::uint64_t{0});
}

InvariantAudit& global_audit() {
    static InvariantAudit audit;
    return audit;
}

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (n_grid.empty()) throw ConfigError("the n grid is empty");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1]) throw ConfigError("the n grid must be strictly increasing");
    if (!(t_alpha > 0) || !std::isfinite(t_alpha)) throw ConfigError("t_alpha must be positive");
    if (threads < 1) throw ConfigError("threads must be at least 1");
}

// Threads are left out on purpose: output must not depend on them.
json ExperimentConfig::to_json() const {
    return {{"body", body_name},
            {"n", n_grid},
            {"trials", trials},
            {"seed", seed},
            {"t_alpha", t_alpha},
            {"L", L},
            {"oracle", oracle},
            {"check_general_position", check_general_position},
            {"event", event},
            {"order_type", order_type},
            {"x", x},
            {"y", y},
            {"iterations", iterations}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig cfg;
    try {
        if (j.contains("body")) {
            const auto& b = j.at("body");
            if (b.is_string()) {
                cfg.body_name = b.get<std::string>();
                cfg.body = resolve_body(cfg.body_name);
            } else {
                cfg.body = normalize_body(ConvexBody::from_json(b)).first;
                cfg.body_name = b.dump();
            }
        }
        if (j.contains("n")) {
            const auto& n = j.at("n");
            cfg.n_grid = n.is_array() ? n.get<std::vector<std::size_t>>() : std::vector<std::size_t>{n.get<std::size_t>()};
        }
        cfg.trials = j.value("trials", cfg.trials);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.t_alpha = j.value("t_alpha", cfg.t_alpha);
        cfg.L = j.value("L", cfg.L);
        cfg.threads = j.value("threads", cfg.threads);
        cfg.oracle = j.value("oracle", cfg.oracle);
        cfg.check_general_position = j.value("check_general_position", cfg.check_general_position);
        cfg.event = j.value("event", cfg.event);
        cfg.order_type = j.value("order_type", cfg.order_type);
        cfg.x = j.value("x", cfg.x);
        cfg.y = j.value("y", cfg.y);
        cfg.iterations = j.value("iterations", cfg.iterations);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    return cfg;
}

const EstimateRow* ExperimentResult::find(std::uint64_t n, std::string_view statistic) const {
    for (const auto& r : rows)
        if (r.n == n && r.statistic == statistic) return &r;
    return nullptr;
}

namespace {

// Stream tags keep the experiments' random streams apart.
enum Stream : std::uint64_t {
    kDegGrowth = 1,
    kValtr,
    kNtPairs,
    kTail,
    kLemma,
    kTransferMultinomial,
    kTransferPoisson,
    kBLMultinomial,
    kBLPoisson,
    kOrderMultinomial,
    kOrderPoisson,
    kMinimize,
};

std::uint64_t trial_seed(const ExperimentConfig& cfg, Stream s, std::size_t n, std::size_t t) {
    return derive_seed(cfg.seed, {s, n, t});
}

template <class T, class Fn>
std::vector<T> run_trials(const ExperimentConfig& cfg, std::size_t trials, Fn&& fn) {
    std::vector<T> out(trials);
    parallel_for(trials, cfg.threads, [&](std::size_t t) { out[t] = fn(t); });
    return out;
}

PointSet draw(const ExperimentConfig& cfg, std::size_t n, std::uint64_t seed, PositionPolicy policy,
              std::vector<Point> prefix = {}) {
    if (cfg.check_general_position) policy = PositionPolicy::general;
    auto pts = sample_uniform(cfg.body, n, seed, {policy, std::move(prefix)});
    if (cfg.check_general_position)
        if (auto bad = first_collinear_triple(pts)) throw GeneralPositionError(*bad);
    return pts;
}

EmptyTriangleReport analyze(const ExperimentConfig& cfg, const PointSet& pts) {
    auto report = degree_report(pts);
    if (cfg.audit) {
        cfg.audit->check(report);
        if (cfg.oracle && pts.size() <= kDefaultOracleCap)
            cfg.audit->check_oracle(report, brute_force_empty_triangles(pts));
    }
    return report;
}

void audit_near_pairs(const ExperimentConfig& cfg, const PointSet& pts, const EmptyTriangleReport& report) {
    if (!cfg.audit || pts.size() < 2) return;
    const double T = cfg.t_alpha / static_cast<double>(pts.size());
    cfg.audit->check_near_pairs(report, near_pairs(pts, T, true));
}

double mean_of(const std::vector<double>& v) {
    MeanAccumulator acc;
    for (double x : v) acc.add(x);
    return acc.mean();
}

std::size_t count_true(const std::vector<char>& v) { return static_cast<std::size_t>(std::count(v.begin(), v.end(), 1)); }

ExperimentConfig checked(const ExperimentConfig& cfg) {
    cfg.validate();
    return cfg;
}

void require_even_grid(const ExperimentConfig& cfg) {
    for (auto n : cfg.n_grid)
        if (n % 2 != 0 || n < 2) throw ConfigError("grid experiments need even n >= 2, got " + std::to_string(n));
}

// Occupancy events on the count vector (N_1 .. N_M).
struct OccupancyEvent {
    enum Kind { always, max_ge, first_eq, exact_ge } kind = always;
    std::uint32_t a = 0, b = 0;

    static OccupancyEvent parse(const std::string& text) {
        OccupancyEvent e;
        auto number = [&](std::string_view s) {
            std::uint32_t v = 0;
            const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError("bad number in event '" + text + "'");
            return v;
        };
        const std::string_view t = text;
        if (t == "always") return e;
        if (t.starts_with("max-ge:")) {
            e.kind = max_ge;
            e.a = number(t.substr(7));
        } else if (t.starts_with("first-eq:")) {
            e.kind = first_eq;
            e.a = number(t.substr(9));
        } else if (t.starts_with("exact-ge:")) {
            const auto rest = t.substr(9);
            const auto colon = rest.find(':');
            if (colon == std::string_view::npos) throw ConfigError("exact-ge needs k:j in event '" + text + "'");
            e.kind = exact_ge;
            e.a = number(rest.substr(0, colon));
            e.b = number(rest.substr(colon + 1));
        } else {
            throw ConfigError("unknown occupancy event '" + text + "'");
        }
        return e;
    }

    bool operator()(const std::vector<std::uint32_t>& counts) const {
        switch (kind) {
            case always: return true;
            case max_ge: return std::any_of(counts.begin(), counts.end(), [&](auto c) { return c >= a; });
            case first_eq: return !counts.empty() && counts[0] == a;
            case exact_ge:
                return static_cast<std::uint32_t>(std::count(counts.begin(), counts.end(), a)) >= b;
        }
        return false;
    }
};

OrderTypeLabel target_label(const std::string& text) {
    if (text.starts_with("convex:")) {
        const auto k = std::stoul(text.substr(7));
        if (k < 3 || k > kMaxLabelPoints) throw ConfigError("convex target needs 3 <= k <= 9");
        return convex_position_label(k);
    }
    try {
        const auto label = OrderTypeLabel::parse(text);
        if (label.k > kMaxLabelPoints) throw ConfigError("order type targets are limited to 9 points");
        // Any sign vector of the type is accepted; search with its canonical form.
        return canonical_label(Chirotope{label.k, label.signs});
    } catch (const OrderTypeError& e) {
        throw ConfigError(e.what());
    }
}

// Degree condition for B_L on one square: exactly l points with deg = l - 2.
bool square_meets(const ExperimentConfig& cfg, const PointSet& payload) {
    if (find_collinear_triple(payload)) return false;
    const auto report = analyze(cfg, payload);
    return report.deg_max + 2 == payload.size();
}

}  // namespace

// ---------------------------------------------------------------------------
// Experiments

ExperimentResult exp_deg_growth(const ExperimentConfig& config) {
    const auto cfg = checked(config);
    ExperimentResult res{"deg-growth", {}, json::object()};
    std::vector<double> xs, ys;
    json ratios = json::array();
    for (auto n : cfg.n_grid) {
        if (n < 3) throw ConfigError("deg-growth needs n >= 3");
        const auto samples = run_trials<double>(cfg, cfg.trials, [&](std::size_t t) {
            const auto pts = draw(cfg, n, trial_seed(cfg, kDegGrowth, n, t), PositionPolicy::general);
            const auto report = analyze(cfg, pts);
            audit_near_pairs(cfg, pts, report);
            return static_cast<double>(report.deg_max);
        });
        res.rows.push_back(EstimateRow::from_samples(n, "deg_max", samples));
        const double ln_n = std::log(static_cast<double>(n));
        xs.push_back(static_cast<double>(n) / ln_n);
        ys.push_back(res.rows.back().mean);
        ratios.push_back({{"n", n}, {"mean_ln_n_over_n", ys.back() / xs.back()}});
    }
    bool increasing = true;
    for (std::size_t i = 1; i < ys.size(); ++i) increasing = increasing && ys[i] > ys[i - 1];
    res.summary["means_strictly_increasing"] = increasing;
    res.summary["ratios"] = ratios;
    if (xs.size() >= 2) {
        // Ordinary least squares of the mean against n / ln n; the fit through
        // the origin is reported alongside.
        const auto fit = fit_line(xs, ys);
        const auto origin = fit_through_origin(xs, ys);
        res.summary["fit"] = {{"model", "affine"},
                              {"c_hat", fit.slope},
                              {"intercept", fit.intercept},
                              {"r_squared", fit.r_squared},
                              {"slope_se", fit.slope_se}};
        res.summary["fit_through_origin"] = {
            {"c_hat", origin.slope}, {"r_squared", origin.r_squared}, {"slope_se", origin.slope_se}};
        // n = 0 marks a row fitted over the whole grid.
        res.rows.push_back({0, "c_hat", fit.slope, fit.slope_se, normal_interval(fit.slope, fit.slope_se),
                            cfg.trials * cfg.n_grid.size()});
    }
    return res;
}

ExperimentResult exp_valtr(const ExperimentConfig& config) {
    const auto cfg = checked(config);
    ExperimentResult res{"valtr", {}, json::object()};
    json deviation = json::array();
    for (auto n : cfg.n_grid) {
        if (n < 3) throw ConfigError("valtr needs n >= 3");
        const auto samples = run_trials<double>(cfg, cfg.trials, [&](std::size_t t) {
            const auto pts = draw(cfg, n, trial_seed(cfg, kValtr, n, t), PositionPolicy::general);
            const auto report = analyze(cfg, pts);
            audit_near_pairs(cfg, pts, report);
            return static_cast<double>(report.f) / static_cast<double>(n * n);
        });
        res.rows.push_back(EstimateRow::from_samples(n, "f_over_n2", samples));
        deviation.push_back({{"n", n}, {"abs_mean_minus_2", std::abs(res.rows.back().mean - 2.0)}});
    }
    res.summary["deviation_from_2"] = deviation;
    if (deviation.size() >= 2)
        res.summary["deviation_shrinks"] = deviation.back()["abs_mean_minus_2"].get<double>() <
                                           deviation.front()["abs_mean_minus_2"].get<double>();
    return res;
}

ExperimentResult exp_ntpairs(const ExperimentConfig& config) {
    const auto cfg = checked(config);
    ExperimentResult res{"ntpairs", {}, json::object()};
    const double predicted = std::numbers::pi / 2 * cfg.t_alpha * cfg.t_alpha;
    json per_n = json::array();
    for (auto n : cfg.n_grid) {
        if (n < 2) throw ConfigError("ntpairs needs n >= 2");
        const double T = cfg.t_alpha / static_cast<double>(n);
        const auto samples = run_trials<double>(cfg, cfg.trials, [&](std::size_t t) {
            const auto pts = draw(cfg, n, trial_seed(cfg, kNtPairs, n, t), PositionPolicy::distinct);
            return static_cast<double>(near_pairs(pts, T).count);
        });
        std::vector<double> ratio;
        for (double s : samples) ratio.push_back(s / predicted);
        res.rows.push_back(EstimateRow::from_samples(n, "N_T", samples));
        res.rows.push_back(EstimateRow::from_samples(n, "N_T_ratio", ratio));
        per_n.push_back({{"n", n}, {"T", T}, {"mean", res.rows[res.rows.size() - 2].mean}});
    }
    res.summary["predicted_mean"] = predicted;
    res.summary["per_n"] = per_n;
    return res;
}

ExperimentResult exp_tail(const ExperimentConfig& config) {
    const auto cfg = checked(config);
    ExperimentResult res{"tail", {}, json::object()};
    json per_n = json::array();
    for (auto n : cfg.n_grid) {
        if (n < 2) throw ConfigError("tail needs n >= 2");
        const double ln_n = std::log(static_cast<double>(n));
        const double threshold = 144 * ln_n;
        const double T = cfg.t_alpha / static_cast<double>(n);
        const auto counts = run_trials<double>(cfg, cfg.trials, [&](std::size_t t) {
            const auto pts = draw(cfg, n, trial_seed(cfg, kTail, n, t), PositionPolicy::distinct);
            return static_cast<double>(near_pairs(pts, T).count);
        });
        const auto hits = static_cast<std::uint64_t>(
            std::count_if(counts.begin(), counts.end(), [&](double c) { return c >= threshold; }));
        res.rows.push_back(EstimateRow::from_proportion(n, "tail_freq", hits, cfg.trials));
        res.rows.push_back(EstimateRow::from_samples(n, "N_T", counts));
        const auto max_seen = *std::max_element(counts.begin(), counts.end());
        per_n.push_back({{"n", n},
                         {"threshold", threshold},
                         {"K_n", 3 * 145 * ln_n},
                         {"occurrences", hits},
                         {"max_N_T", max_seen},
                         {"wilson_upper", res.rows[res.rows.size() - 2].ci.hi},
                         {"n_pow_minus_3", std::pow(static_cast<double>(n), -3.0)}});
    }
    res.summary["per_n"] = per_n;
    res.summary["note"] =
        "one-sided consistency check: zero occurrences are consistent with a c n^-3 bound; the Wilson upper limit "
        "is far above n^-3, so the constant is not recoverable";
    return res;
}

ExperimentResult exp_lemma_ad(const ExperimentConfig& config) {
    const auto cfg = checked(config);
    ExperimentResult res{"lemma-ad", {}, json::object()};
    const auto scale = grid_scale_for(cfg.body);
    const Point qx = quantize(cfg.x, scale), qy = quantize(cfg.y, scale);
    if (qx == qy) throw ConfigError("x and y coincide on the sampling grid");
    // Quadrature uses the grid images so both sides see the same pair.
    const Vec2 x = dequantize(qx, scale), y = dequantize(qy, scale);
    if (!cfg.body.contains(x, 0.0) || !cfg.body.contains(y, 0.0)) throw ConfigError("x and y must lie in the body");
    const double dist = std::hypot(y[0] - x[0], y[1] - x[1]);
    json per_n = json::array();
    for (auto n : cfg.n_grid) {
        if (n < 3) throw ConfigError("lemma-ad needs n >= 3");
        if (dist > 1.0 / static_cast<double>(n) * (1 + 1e-9))
            throw ConfigError("lemma-ad needs |x - y| <= 1/n for n = " + std::to_string(n));
        const auto samples = run_trials<double>(cfg, cfg.trials, [&](std::size_t t) {
            const auto pts = draw(cfg, n - 2, trial_seed(cfg, kLemma, n, t), PositionPolicy::general, {qx, qy});
            return static_cast<double>(pair_degree(pts, 0, 1));
        });
        const auto mc = EstimateRow::from_samples(n, "deg_mc", samples);
        const auto q = expected_pair_degree(cfg.body, x, y, static_cast<unsigned>(n));
        EstimateRow quad{n, "deg_quadrature", q.value, q.error_estimate, {q.value - q.error_estimate, q.value + q.error_estimate}, 0};
        res.rows.push_back(mc);
        res.rows.push_back(quad);
        const double denom = std::hypot(mc.standard_error, q.error_estimate);
        const double diff = mc.mean - q.value;
        const double z = denom > 0 ? diff / denom : (diff == 0 ? 0.0 : std::copysign(INFINITY, diff));
        const double bound = cfg.body.rho * static_cast<double>(n) * (1 - std::exp(-cfg.body.rho / 2));
        per_n.push_back({{"n", n},
                         {"mc_mean", mc.mean},
                         {"quadrature", q.value},
                         {"z_score", z},
                         {"lower_bound", bound},
                         {"both_above_bound", mc.mean >= bound && q.value >= bound}});
    }
    res.summary["x"] = x;
    res.summary["y"] = y;
    res.summary["rho"] = cfg.body.rho;
    res.summary["per_n"] = per_n;
    return res;
}

ExperimentResult exp_transfer(const ExperimentConfig& config) {
    const auto cfg = checked(config);
    require_even_grid(cfg);
    const auto event = OccupancyEvent::parse(cfg.event);
    ExperimentResult res{"transfer", {}, json::object()};
    json per_n = json::array();
    for (auto n : cfg.n_grid) {
        const auto grid = build_grid(cfg.body, n);
        const auto multi = run_trials<char>(cfg, cfg.trials, [&](std::size_t t) {
            const auto pts = draw(cfg, n, trial_seed(cfg, kTransferMultinomial, n, t), PositionPolicy::distinct);
            return static_cast<char>(event(occupancy_from_sample(pts, grid).counts));
        });
        const auto pois = run_trials<char>(cfg, cfg.trials, [&](std::size_t t) {
            return static_cast<char>(event(sample_poisson_counts(grid.squares.size(), trial_seed(cfg, kTransferPoisson, n, t))));
        });
        const auto hm = count_true(multi), hp = count_true(pois);
        res.rows.push_back(EstimateRow::from_proportion(n, "p_multinomial", hm, cfg.trials));
        res.rows.push_back(EstimateRow::from_proportion(n, "p_poisson", hp, cfg.trials));
        EstimateRow ratio{n, "ratio", NAN, NAN, {NAN, NAN}, cfg.trials};
        if (hp > 0) {
            // Delta method for a ratio of independent proportions.
            const double tt = static_cast<double>(cfg.trials);
            const double pm = static_cast<double>(hm) / tt, pp = static_cast<double>(hp) / tt;
            ratio.mean = pm / pp;
            const double var = pm * (1 - pm) / tt / (pp * pp) + pm * pm * pp * (1 - pp) / tt / (pp * pp * pp * pp);
            ratio.standard_error = std::sqrt(var);
            ratio.ci = normal_interval(ratio.mean, ratio.standard_error);
        }
        res.rows.push_back(ratio);
        per_n.push_back({{"n", n}, {"squares", grid.squares.size()}, {"indeterminate", hp == 0}});
    }
    res.summary["event"] = cfg.event;
    res.summary["per_n"] = per_n;
    return res;
}

ExperimentResult exp_BL(const ExperimentConfig& config) {
    const auto cfg = checked(config);
    require_even_grid(cfg);
    ExperimentResult res{"bl", {}, json::object()};
    const std::size_t L = cfg.L;
    // Levels l < 3 hold vacuously; only 3..L are checked.
    const std::size_t levels = L >= 3 ? L - 2 : 0;
    auto evaluate = [&](auto&& count_of, auto&& payload_of, std::size_t squares) {
        std::vector<char> met(levels, 0);
        for (std::size_t s = 0; s < squares; ++s) {
            const auto c = count_of(s);
            if (c < 3 || c > L || met[c - 3]) continue;
            if (square_meets(cfg, payload_of(s))) met[c - 3] = 1;
        }
        return met;
    };
    json per_n = json::array();
    for (auto n : cfg.n_grid) {
        const auto grid = build_grid(cfg.body, n);
        const auto multi = run_trials<std::vector<char>>(cfg, cfg.trials, [&](std::size_t t) {
            const auto pts = draw(cfg, n, trial_seed(cfg, kBLMultinomial, n, t), PositionPolicy::distinct);
            const auto occ = occupancy_from_sample(pts, grid);
            return evaluate([&](std::size_t s) { return occ.counts[s]; },
                            [&](std::size_t s) { return pts.subset(occ.payloads[s]); }, occ.counts.size());
        });
        const auto pois = run_trials<std::vector<char>>(cfg, cfg.trials, [&](std::size_t t) {
            const auto model = sample_poisson_grid(grid, trial_seed(cfg, kBLPoisson, n, t));
            return evaluate([&](std::size_t s) { return model.counts[s]; },
                            [&](std::size_t s) -> const PointSet& { return model.payloads[s]; }, model.counts.size());
        });
        auto all_met = [](const std::vector<std::vector<char>>& v) {
            return static_cast<std::uint64_t>(std::count_if(
                v.begin(), v.end(), [](const auto& m) { return std::all_of(m.begin(), m.end(), [](char c) { return c; }); }));
        };
        res.rows.push_back(EstimateRow::from_proportion(n, "P_BL_multinomial", all_met(multi), cfg.trials));
        res.rows.push_back(EstimateRow::from_proportion(n, "P_BL_poisson", all_met(pois), cfg.trials));
        json levels_json = json::array();
        for (std::size_t l = 0; l < levels; ++l) {
            const auto c = std::count_if(multi.begin(), multi.end(), [&](const auto& m) { return m[l]; });
            levels_json.push_back({{"l", l + 3}, {"frequency", static_cast<double>(c) / static_cast<double>(cfg.trials)}});
        }
        per_n.push_back({{"n", n}, {"squares", grid.squares.size()}, {"levels", levels_json}});
    }
    res.summary["L"] = L;
    res.summary["vacuous_levels"] = "l < 3";
    res.summary["per_n"] = per_n;
    return res;
}

ExperimentResult exp_ordertype_search(const ExperimentConfig& config) {
    const auto cfg = checked(config);
    require_even_grid(cfg);
    const auto target = target_label(cfg.order_type);
    ExperimentResult res{"ordertype-search", {}, json::object()};
    struct Trial {
        char hit = 0;
        double rate = 0.0;
    };
    json per_n = json::array();
    for (auto n : cfg.n_grid) {
        const auto grid = build_grid(cfg.body, n);
        const double M = static_cast<double>(grid.squares.size());
        const auto multi = run_trials<Trial>(cfg, cfg.trials, [&](std::size_t t) {
            const auto pts = draw(cfg, n, trial_seed(cfg, kOrderMultinomial, n, t), PositionPolicy::distinct);
            const auto occ = occupancy_from_sample(pts, grid);
            const auto first = find_type_in_squares(pts, occ, target);
            std::size_t matches = 0;
            if (first)
                for (std::size_t s = *first; s < occ.counts.size(); ++s) {
                    if (occ.counts[s] != target.k) continue;
                    const auto payload = pts.subset(occ.payloads[s]);
                    if (!find_collinear_triple(payload) && canonical_label(payload) == target) ++matches;
                }
            return Trial{static_cast<char>(first.has_value()), static_cast<double>(matches) / M};
        });
        const auto pois = run_trials<char>(cfg, cfg.trials, [&](std::size_t t) {
            const auto model = sample_poisson_grid(grid, trial_seed(cfg, kOrderPoisson, n, t));
            return static_cast<char>(find_type_in_squares(model, target).has_value());
        });
        std::uint64_t hits = 0;
        std::vector<double> rates;
        for (const auto& tr : multi) {
            hits += tr.hit;
            rates.push_back(tr.rate);
        }
        res.rows.push_back(EstimateRow::from_proportion(n, "hit_freq", hits, cfg.trials));
        res.rows.push_back(EstimateRow::from_proportion(n, "hit_freq_poisson", count_true(pois), cfg.trials));
        res.rows.push_back(EstimateRow::from_samples(n, "per_square_rate", rates));
        per_n.push_back({{"n", n}, {"squares", grid.squares.size()}, {"per_square_rate_positive", mean_of(rates) > 0}});
    }
    double factorial = 1;
    for (std::size_t i = 2; i <= target.k; ++i) factorial *= static_cast<double>(i);
    res.summary["target"] = target.str();
    res.summary["k"] = target.k;
    res.summary["poisson_exact_k_rate"] = std::exp(-1.0) / factorial;
    res.summary["per_n"] = per_n;
    return res;
}

ExperimentResult exp_minimize_f(const ExperimentConfig& config) {
    const auto cfg = checked(config);
    ExperimentResult res{"minimize-f", {}, json::object()};
    json per_n = json::array();
    for (auto n : cfg.n_grid) {
        if (n < 5) throw ConfigError("minimize-f needs n >= 5");
        const auto runs = run_trials<MinimizeResult>(
            cfg, cfg.trials, [&](std::size_t t) { return minimize_f(n, cfg.iterations, trial_seed(cfg, kMinimize, n, t)); });
        std::vector<double> initial, final_f;
        std::size_t best = 0;
        const double n2 = static_cast<double>(n * n);
        for (std::size_t t = 0; t < runs.size(); ++t) {
            if (cfg.audit) cfg.audit->check(degree_report(runs[t].best));
            initial.push_back(static_cast<double>(runs[t].f_initial) / n2);
            final_f.push_back(static_cast<double>(runs[t].f_best) / n2);
            if (runs[t].f_best < runs[best].f_best) best = t;
        }
        res.rows.push_back(EstimateRow::from_samples(n, "f_initial_over_n2", initial));
        res.rows.push_back(EstimateRow::from_samples(n, "f_final_over_n2", final_f));
        json trace = json::array();
        for (const auto& [it, f] : runs[best].trace) trace.push_back({it, f});
        json points = json::array();
        for (const auto& p : runs[best].best) points.push_back({p.x, p.y});
        const auto lower = static_cast<std::int64_t>(n * n) - static_cast<std::int64_t>(5 * n);
        per_n.push_back({{"n", n},
                         {"best_f", runs[best].f_best},
                         {"best_f_over_n2", static_cast<double>(runs[best].f_best) / n2},
                         {"lower_bound_n2_minus_5n", lower},
                         {"upper_reference_1_6195_n2", 1.6195 * n2},
                         {"trace", trace},
                         {"best_points", points}});
    }
    res.summary["iterations"] = cfg.iterations;
    res.summary["per_n"] = per_n;
    return res;
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"deg-growth", "valtr", "ntpairs", "tail", "lemma-ad",
                                                "transfer", "bl", "ordertype-search", "minimize-f"};
    return names;
}

ExperimentResult run_experiment(std::string_view name, const ExperimentConfig& cfg) {
    if (name == "deg-growth") return exp_deg_growth(cfg);
    if (name == "valtr") return exp_valtr(cfg);
    if (name == "ntpairs") return exp_ntpairs(cfg);
    if (name == "tail") return exp_tail(cfg);
    if (name == "lemma-ad") return exp_lemma_ad(cfg);
    if (name == "transfer") return exp_transfer(cfg);
    if (name == "bl") return exp_BL(cfg);
    if (name == "ordertype-search") return exp_ordertype_search(cfg);
    if (name == "minimize-f") return exp_minimize_f(cfg);
    throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Output

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::vector<std::string> provenance_header(std::string_view name, const ExperimentConfig& cfg) {
    return {"tool: " + std::string(kToolVersion), "experiment: " + std::string(name),
            "seed: " + std::to_string(cfg.seed), "config: " + cfg.to_json().dump()};
}

void write_csv(std::ostream& out, const ExperimentResult& result, const std::vector<std::string>& header) {
    for (const auto& h : header) out << "# " << h << '\n';
    out << "n,statistic,mean,standard_error,ci_lo,ci_hi,trials\n";
    for (const auto& r : result.rows)
        out << r.n << ',' << r.statistic << ',' << format_double(r.mean) << ',' << format_double(r.standard_error)
            << ',' << format_double(r.ci.lo) << ',' << format_double(r.ci.hi) << ',' << r.trials << '\n';
}

json summary_json(const ExperimentResult& result, const ExperimentConfig& cfg) {
    json rows = json::array();
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); };
    for (const auto& r : result.rows)
        rows.push_back({{"n", r.n},
                        {"statistic", r.statistic},
                        {"mean", num(r.mean)},
                        {"standard_error", num(r.standard_error)},
                        {"ci", {num(r.ci.lo), num(r.ci.hi)}},
                        {"trials", r.trials}});
    return {{"tool", kToolVersion},
            {"experiment", result.name},
            {"seed", cfg.seed},
            {"config", cfg.to_json()},
            {"rows", rows},
            {"summary", result.summary}};
}

}  // namespace emptytri
