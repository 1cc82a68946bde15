#pragma once

// Frozen expectation files: per-row windows that an experiment's output is
// checked against.
//
// {
//   "experiment": "valtr",
//   "rows": [ {"n": 400, "statistic": "f_over_n2", "field": "mean", "min": 1.6, "max": 2.4} ]
// }
//
// "field" is one of mean, standard_error, ci_lo, ci_hi (default mean);
// either bound may be omitted.

#include <string>
#include <vector>

#include "emptytri/experiments.hpp"
#include "json.hpp"

namespace emptytri {

struct FrozenFailure {
    std::uint64_t n = 0;
    std::string statistic;
    std::string message;
};

/// Throws ConfigError on a malformed file or an experiment-name mismatch.
std::vector<FrozenFailure> check_frozen(const ExperimentResult& result, const nlohmann::json& frozen);
nlohmann::json read_frozen_file(const std::string& path);

}  // namespace emptytri
