// experiment.hpp
// Batch front end: dispatch a parsed configuration to one of the channels and
// emit CSV + JSON artifacts into the configured output directory.

#pragma once

#include <string>
#include <vector>

#include "dyson/config.hpp"
#include "dyson/sde.hpp"
#include "dyson/spectral.hpp"

namespace dyson {

struct RunOptions {
    bool strict = false;   // exit code 2 on bound violations
    bool gnuplot = false;  // emit a plot script referencing the CSVs
};

// Returns the process exit code: 0 success, 2 bound violation under strict.
// Runtime errors propagate as exceptions (the CLI maps them to exit 1).
int run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

// Mean of the empirical pseudo-CDFs of the samples on a uniform grid.
PseudoCDF average_empirical_cdf(const std::vector<LiftedConfiguration>& samples,
                                std::size_t grid_size);

// Density trajectory round trip through the CSV format written by the
// density channel (header "t,mu_0,...").
void write_density_csv(const DensityTrajectory& trajectory, const std::string& path);
DensityTrajectory read_density_csv(const std::string& path);

}  // namespace dyson
