// presets.hpp
// Named initial data shared by all channels, plus the quantile placement that
// turns a density into a deterministic particle configuration.

#pragma once

#include <string>

#include "dyson/circle.hpp"
#include "dyson/matrix.hpp"

namespace dyson {

struct InitialSpec {
    enum class Kind { Uniform, EquallySpaced, OneAtom, CosineBump, TwoCluster, Cosine, Csv };
    Kind kind = Kind::Uniform;
    double parameter = 0.0;  // kappa for cosine_bump, amplitude for cosine
    std::string path;        // csv source

    // "uniform", "equally_spaced", "one_atom", "cosine_bump(50)",
    // "two_cluster", "cosine(0.5)", "csv:<path>"
    static InitialSpec parse(const std::string& text);
    std::string describe() const;
};

PeriodicDensity density_preset(const InitialSpec& spec, std::size_t grid_size);
PseudoCDF cdf_preset(const InitialSpec& spec, std::size_t grid_size);
LiftedConfiguration particle_preset(const InitialSpec& spec, std::size_t count);
ComplexMatrix unitary_preset(const InitialSpec& spec, std::size_t dimension);

// lambda_i = F^{-1}((i + 1/2)/N) from a tabulated pseudo-CDF.
LiftedConfiguration quantile_particles(const PseudoCDF& cdf, std::size_t count);

}  // namespace dyson
