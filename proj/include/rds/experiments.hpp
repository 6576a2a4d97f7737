#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rds/image.hpp"

namespace rds {

struct ExperimentOptions {
    std::string out_dir = "experiments_out";
    int jobs = 1;  // experiments run concurrently when > 1
};

struct ExperimentResult {
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    std::string detail;  // one-line summary of the checks
    std::vector<std::pair<std::string, std::string>> stats;
};

/// Names of all registered experiments, in execution order.
std::vector<std::string> experiment_names();

/// Run one experiment by name: generates its scene, solves, writes images
/// and a report.txt under <out_dir>/<name>/, and evaluates its automated
/// checks. Throws std::invalid_argument for unknown names.
ExperimentResult run_experiment(const std::string& name, const ExperimentOptions& options);

/// Run several experiments, optionally on multiple threads.
std::vector<ExperimentResult> run_experiments(const std::vector<std::string>& names,
                                              const ExperimentOptions& options);

}  // namespace rds
