#pragma once
#include <string>

#include "errexp/saddle.hpp"
#include "errexp/threshold.hpp"

namespace errexp {

struct OptimizerConfig {
    double rho_min = 0.0, rho_max = 8.0;
    double lambda_min = 0.0, lambda_max = 2.0;
    int rho_grid = 17, lambda_grid = 17;
    int refine_iters = 60;
    double threshold_tol = 4e-4;
    double bracket_lo = 1e-4;
    long slope_tuples = 6000000;
    int max_escalations = 2;
    int slope_population = 200000;  // population used while locating thresholds
    int slope_sweeps = 280;
};

struct OutputConfig {
    std::string csv;   // empty = stdout only
    std::string json;  // empty = no manifest
    int precision = 10;
};

struct RunConfig {
    PopulationConfig population;
    OptimizerConfig optimizer;
    OutputConfig output;
};

// key = value file with [population], [optimizer] and [output] sections;
// '#' starts a comment.  Unknown sections or keys and malformed values are
// reported with their line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

OptimizeOptions to_optimize_options(const RunConfig& rc);
ThresholdOptions to_threshold_options(const RunConfig& rc);

}  // namespace errexp
