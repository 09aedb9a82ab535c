#pragma once

#include <optional>
#include <string>
#include <vector>

#include "derivsim/mc.hpp"

namespace derivsim::cli {

// Parsed experiment document: the mc config plus the sweep/sensitivity and
// pool sections that only the front end consumes.
struct ExperimentFile {
    mc::ExperimentConfig config;
    std::vector<double> grid_sigmas;
    std::vector<double> grid_leverages;
    double tornado_shock = 0.20;
    std::vector<std::string> tornado_parameters;
    std::optional<double> pool_initial_deposit;
};

ExperimentFile load_experiment_file(const std::string& config_path);
ExperimentFile parse_experiment_json(const json& document);

// Exit codes: 0 success, 1 configuration/validation error, 2 I/O error.
int run_cli(int argc, const char* const* argv);

}  // namespace derivsim::cli
