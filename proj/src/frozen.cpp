#include "emptytri/frozen.hpp"

#include <cmath>
#include <fstream>

namespace emptytri {

using nlohmann::json;

namespace {

double field_of(const EstimateRow& row, const std::string& field) {
    if (field == "mean") return row.mean;
    if (field == "standard_error") return row.standard_error;
    if (field == "ci_lo") return row.ci.lo;
    if (field == "ci_hi") return row.ci.hi;
    throw ConfigError("unknown frozen field '" + field + "'");
}

}  // namespace

std::vector<FrozenFailure> check_frozen(const ExperimentResult& result, const json& frozen) {
    std::vector<FrozenFailure> failures;
    try {
        if (frozen.contains("experiment") && frozen.at("experiment").get<std::string>() != result.name)
            throw ConfigError("frozen file is for experiment '" + frozen.at("experiment").get<std::string>() +
                              "', not '" + result.name + "'");
        for (const auto& w : frozen.at("rows")) {
            const auto n = w.at("n").get<std::uint64_t>();
            const auto stat = w.at("statistic").get<std::string>();
            const auto field = w.value("field", std::string("mean"));
            const auto* row = result.find(n, stat);
            if (!row) {
                failures.push_back({n, stat, "row missing from the output"});
                continue;
            }
            const double v = field_of(*row, field);
            const bool below = w.contains("min") && !(v >= w.at("min").get<double>());
            const bool above = w.contains("max") && !(v <= w.at("max").get<double>());
            if (below || above)
                failures.push_back({n, stat,
                                    field + " = " + format_double(v) + " outside [" +
                                        (w.contains("min") ? format_double(w.at("min").get<double>()) : "-inf") + ", " +
                                        (w.contains("max") ? format_double(w.at("max").get<double>()) : "inf") + "]"});
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed frozen file: ") + e.what());
    }
    return failures;
}

json read_frozen_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open frozen file " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("cannot parse frozen file " + path + ": " + e.what());
    }
}

}  // namespace emptytri
