// config.hpp
// Line-based "key = value" experiment configuration with '#' comments.
// Unknown keys are rejected; every error carries its line number.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyson/presets.hpp"

namespace dyson {

enum class Channel { Particles, Matrix, Density, Primitive, Compare, Report };

std::string channel_name(Channel c);

struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_number, const std::string& message)
        : std::runtime_error("config line " + std::to_string(line_number) + ": " + message),
          line(line_number) {}
};

struct ExperimentConfig {
    Channel channel = Channel::Density;
    std::size_t particle_count = 16;     // N
    std::size_t grid_size = 256;         // M
    double total_time = 1.0;             // T
    double dt = 1e-3;                    // particle / matrix step
    double epsilon = -1.0;               // density viscosity; < 0 means grid-scale default
    std::uint64_t seed = 1;
    std::size_t runs = 1;                // Monte-Carlo count
    std::size_t record_every = 1;
    InitialSpec initial;                 // default uniform
    std::string output_dir = "out";
    std::string input;                   // report channel: saved density trajectory CSV
    std::vector<std::size_t> compare_counts{64, 256};  // compare channel N values

    double viscosity_for(std::size_t m) const {  // grid-scale default
        return epsilon >= 0.0 ? epsilon : 0.5 * kTwoPi / static_cast<double>(m);
    }
};

// Throws ConfigError on unknown keys, bad types, bad values or a missing
// channel.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace dyson
