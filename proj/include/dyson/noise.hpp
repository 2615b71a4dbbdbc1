// noise.hpp
// Counter-based Gaussian noise built on Philox4x32-10. A draw is a pure
// function of (seed, 128-bit address), never of call order, which is what
// lets two coupled particle systems ride literally the same Brownian paths
// and lets a rejected step be refined into a Brownian bridge without
// perturbing the rest of the trajectory.

#pragma once

#include <array>
#include <cstdint>

namespace dyson {

// Raw Philox4x32-10 block: 128-bit counter, 64-bit key, 128-bit output.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        std::uint64_t key);

class NoiseStream {
public:
    explicit NoiseStream(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // One standard normal addressed by four counter words.
    double gaussian(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                    std::uint32_t c3) const;

    // Brownian increment addresses for the particle channel. `node` encodes a
    // dyadic refinement position (heap code 2^level + offset); node = 0 is the
    // base increment over the whole step.
    double brownian(std::uint32_t particle, std::uint32_t step,
                    std::uint64_t node = 0) const;

    // Matrix-channel addresses: one normal per (step, entry, component).
    double gue_entry(std::uint32_t step, std::uint32_t flat_index,
                     std::uint32_t component) const;

private:
    std::uint64_t seed_;
};

}  // namespace dyson
