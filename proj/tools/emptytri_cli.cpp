// Command-line front end: analyze a point file, draw samples, run experiments.
//
// Exit codes: 0 success, 1 usage or config error, 2 data error, 3 frozen-window
// failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "emptytri/body.hpp"
#include "emptytri/engine.hpp"
#include "emptytri/experiments.hpp"
#include "emptytri/frozen.hpp"
#include "emptytri/parallel.hpp"
#include "emptytri/point_io.hpp"
#include "emptytri/sampling.hpp"

using namespace emptytri;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitAcceptance = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::size_t> parse_grid(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != item.size()) throw UsageError("bad value '" + item + "' in --n");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw UsageError("--n needs at least one value");
    return out;
}

Vec2 parse_vec(const std::string& text, const char* flag) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) throw std::invalid_argument(text);
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw UsageError(std::string("expected x,y for ") + flag);
    }
}

std::string triple_text(const Triple& t) {
    return "(" + std::to_string(t[0]) + ", " + std::to_string(t[1]) + ", " + std::to_string(t[2]) + ")";
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string input;
    std::optional<double> t;
    std::string degrees_csv;
    bool oracle = false;
    bool check_gp = false;
};

int cmd_analyze(const AnalyzeArgs& a) {
    const auto pts = read_point_set_file(a.input);
    if (a.check_gp)
        if (auto bad = first_collinear_triple(pts)) throw GeneralPositionError(*bad);
    const auto report = degree_report(pts);
    json out{{"n", report.n},
             {"f", report.f},
             {"deg_max", report.deg_max},
             {"argmax_pair", report.argmax_pair},
             {"degree_histogram", report.degree_histogram()},
             {"degree_sum", report.degree_sum()},
             {"degree_sum_is_3f", report.degree_sum() == 3 * report.f}};
    if (a.oracle) {
        const auto oracle = brute_force_empty_triangles(pts, std::max(kDefaultOracleCap, pts.size()));
        out["oracle_agrees"] = oracle == report;
    }
    if (a.t) {
        if (!(*a.t > 0)) throw UsageError("--t must be positive");
        const auto near = near_pairs(pts, *a.t, true);
        const auto sum = thresholded_degree_sum(report, near);
        out["near_pairs"] = {{"T", *a.t},
                             {"threshold_sq", to_string(near.threshold_sq)},
                             {"N_T", near.count},
                             {"thresholded_degree_sum", sum},
                             {"bound_N_T_times_deg_max", near.count * report.deg_max}};
    }
    if (!a.degrees_csv.empty()) {
        std::ofstream csv(a.degrees_csv);
        if (!csv) throw std::runtime_error("cannot write " + a.degrees_csv);
        csv << "i,j,deg\n";
        for (std::size_t i = 0; i < report.n; ++i)
            for (std::size_t j = i + 1; j < report.n; ++j) csv << i << ',' << j << ',' << report.degree(i, j) << '\n';
    }
    std::cout << out.dump(2) << '\n';
    return out.value("oracle_agrees", true) ? 0 : kExitData;
}

struct SampleArgs {
    std::string body = "square";
    std::size_t n = 0;
    std::uint64_t seed = 1;
    std::string out;
    bool distinct_only = false;
};

int cmd_sample(const SampleArgs& a) {
    const auto body = resolve_body(a.body);
    const auto policy = a.distinct_only ? PositionPolicy::distinct : PositionPolicy::general;
    const auto pts = sample_uniform(body, a.n, a.seed, {policy, {}});
    const std::vector<std::string> header{
        "tool: " + std::string(kToolVersion), "body: " + a.body, "n: " + std::to_string(a.n),
        "seed: " + std::to_string(a.seed),
        std::string("position: ") + (a.distinct_only ? "distinct" : "general")};
    if (a.out.empty()) {
        write_point_set(std::cout, pts, header);
    } else {
        std::ofstream f(a.out);
        if (!f) throw std::runtime_error("cannot write " + a.out);
        write_point_set(f, pts, header);
    }
    return 0;
}

struct ExperimentArgs {
    std::string name;
    std::string config;
    std::string n, body, event, order_type, x, y, out, frozen;
    std::optional<std::size_t> trials, L, iterations;
    std::optional<std::uint64_t> seed;
    std::optional<double> t_alpha;
    std::optional<unsigned> threads;
    bool oracle = false;
    bool check_gp = false;
};

int cmd_experiment(const ExperimentArgs& a) {
    json j = json::object();
    if (!a.config.empty()) {
        std::ifstream in(a.config);
        if (!in) throw ConfigError("cannot open config " + a.config);
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw ConfigError("cannot parse config " + a.config + ": " + e.what());
        }
    }
    // Flags override the config file.
    if (!a.body.empty()) j["body"] = a.body;
    if (!a.n.empty()) j["n"] = parse_grid(a.n);
    if (a.trials) j["trials"] = *a.trials;
    if (a.seed) j["seed"] = *a.seed;
    if (a.t_alpha) j["t_alpha"] = *a.t_alpha;
    if (a.L) j["L"] = *a.L;
    if (a.threads) j["threads"] = *a.threads;
    if (a.iterations) j["iterations"] = *a.iterations;
    if (!a.event.empty()) j["event"] = a.event;
    if (!a.order_type.empty()) j["order_type"] = a.order_type;
    if (!a.x.empty()) j["x"] = parse_vec(a.x, "--x");
    if (!a.y.empty()) j["y"] = parse_vec(a.y, "--y");
    if (a.oracle) j["oracle"] = true;
    if (a.check_gp) j["check_general_position"] = true;
    auto cfg = ExperimentConfig::from_json(j);
    if (!j.contains("threads")) cfg.threads = default_threads();
    cfg.validate();

    const auto result = run_experiment(a.name, cfg);
    const auto header = provenance_header(a.name, cfg);
    auto summary = summary_json(result, cfg);
    summary["invariant_audit"] = cfg.audit->to_json();

    int code = 0;
    if (!a.frozen.empty()) {
        const auto failures = check_frozen(result, read_frozen_file(a.frozen));
        json f = json::array();
        for (const auto& fail : failures) {
            std::cerr << "frozen window failed: n=" << fail.n << " " << fail.statistic << ": " << fail.message << '\n';
            f.push_back({{"n", fail.n}, {"statistic", fail.statistic}, {"message", fail.message}});
        }
        summary["frozen_failures"] = f;
        if (!failures.empty()) code = kExitAcceptance;
    }
    if (cfg.audit->violations() > 0) {
        std::cerr << "invariant violations: " << cfg.audit->to_json().dump() << '\n';
        code = kExitData;
    }

    if (a.out.empty()) {
        write_csv(std::cout, result, header);
    } else {
        std::filesystem::create_directories(a.out);
        const auto base = std::filesystem::path(a.out) / a.name;
        std::ofstream csv(base.string() + ".csv");
        std::ofstream js(base.string() + ".json");
        if (!csv || !js) throw std::runtime_error("cannot write into " + a.out);
        write_csv(csv, result, header);
        js << summary.dump(2) << '\n';
        std::cerr << "wrote " << base.string() << ".csv and .json\n";
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Empty-triangle statistics of planar point sets"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    AnalyzeArgs analyze;
    auto* an = app.add_subcommand("analyze", "Report the empty-triangle count and pair degrees of a point file");
    an->add_option("input", analyze.input, "Point-set file")->required();
    an->add_option("--t", analyze.t, "Also count pairs at distance <= T (body units)");
    an->add_option("--degrees-csv", analyze.degrees_csv, "Dump the full degree table as i,j,deg");
    an->add_flag("--oracle", analyze.oracle, "Cross-check with the brute-force oracle");
    an->add_flag("--check-general-position", analyze.check_gp, "Brute-force general position check first");

    SampleArgs sample;
    auto* sa = app.add_subcommand("sample", "Draw uniform points from a body");
    sa->add_option("--body", sample.body, "square, disk, triangle or a JSON body file");
    sa->add_option("--n", sample.n, "Number of points")->required();
    sa->add_option("--seed", sample.seed, "Base seed");
    sa->add_option("--out", sample.out, "Output file (default stdout)");
    sa->add_flag("--distinct-only", sample.distinct_only, "Skip the general-position resampling");

    ExperimentArgs exp;
    auto* ex = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
    ex->add_option("name", exp.name, "Experiment")->required()->check(CLI::IsMember(experiment_names()));
    ex->add_option("--config", exp.config, "JSON config file");
    ex->add_option("--n", exp.n, "Sample size or comma-separated grid");
    ex->add_option("--trials", exp.trials, "Trials per n");
    ex->add_option("--seed", exp.seed, "Base seed");
    ex->add_option("--body", exp.body, "square, disk, triangle or a JSON body file");
    ex->add_option("--t-alpha", exp.t_alpha, "alpha in T = alpha / n");
    ex->add_option("--L", exp.L, "L for the B_L experiment");
    ex->add_option("--out", exp.out, "Output directory for <name>.csv and <name>.json (default: CSV to stdout)");
    ex->add_option("--frozen", exp.frozen, "Frozen expectation file to check against");
    ex->add_flag("--oracle", exp.oracle, "Cross-check reports with the brute-force oracle (n <= 64)");
    ex->add_flag("--check-general-position", exp.check_gp, "Force and verify general position of every sample");
    ex->add_option("--threads", exp.threads, "Worker threads (output does not depend on this)");
    ex->add_option("--event", exp.event, "Transfer event: always, max-ge:m, first-eq:k, exact-ge:k:j");
    ex->add_option("--order-type", exp.order_type, "Search target: convex:k or a label k:+-...");
    ex->add_option("--x", exp.x, "First point of the pair, x,y");
    ex->add_option("--y", exp.y, "Second point of the pair, x,y");
    ex->add_option("--iterations", exp.iterations, "Hill-climbing iterations per run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*an) return cmd_analyze(analyze);
        if (*sa) return cmd_sample(sample);
        return cmd_experiment(exp);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const GeneralPositionError& e) {
        std::cerr << "error: points " << triple_text(e.triple()) << " are collinear\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}
