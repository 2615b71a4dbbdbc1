#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "dyson/noise.hpp"

using namespace dyson;

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST_CASE("philox4x32-10 known-answer vectors") {
    {
        const auto out = philox4x32({0u, 0u, 0u, 0u}, 0u);
        CHECK(out[0] == 0x6627e8d5u);
        CHECK(out[1] == 0xe169c58du);
        CHECK(out[2] == 0xbc57ac4cu);
        CHECK(out[3] == 0x9b00dbd8u);
    }
    {
        const auto out = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                    0xffffffffffffffffull);
        CHECK(out[0] == 0x408f276du);
        CHECK(out[1] == 0x41c83b0eu);
        CHECK(out[2] == 0xa20bc7c6u);
        CHECK(out[3] == 0x6d5451fdu);
    }
    {
        const std::uint64_t key = 0x299f31d0a4093822ull;  // {a4093822, 299f31d0}
        const auto out = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, key);
        CHECK(out[0] == 0xd16cfe09u);
        CHECK(out[1] == 0x94fdccebu);
        CHECK(out[2] == 0x5001e420u);
        CHECK(out[3] == 0x24126ea1u);
    }
}

TEST_CASE("draws are pure functions of the address") {
    NoiseStream a(42), b(42), c(43);
    CHECK(a.gaussian(1, 2, 3, 4) == b.gaussian(1, 2, 3, 4));
    CHECK(a.brownian(5, 9) == b.brownian(5, 9));
    CHECK(a.brownian(5, 9, 17) == b.brownian(5, 9, 17));
    CHECK(a.gaussian(1, 2, 3, 4) != c.gaussian(1, 2, 3, 4));
    CHECK(a.brownian(5, 9) != a.brownian(5, 10));
    CHECK(a.brownian(5, 9) != a.brownian(6, 9));
    CHECK(a.brownian(5, 9, 0) != a.brownian(5, 9, 1));
    // bridge nodes never collide with the gue domain
    CHECK(a.brownian(5, 9, 1) != a.gue_entry(9, 5, 1));
}

TEST_CASE("gaussian moments") {
    NoiseStream noise(2024);
    const int samples = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double g = noise.brownian(0, static_cast<std::uint32_t>(k));
        sum += g;
        sum_sq += g * g;
    }
    const double mean = sum / samples;
    const double var = sum_sq / samples - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.02);
}
