#include "dyson/noise.hpp"

#include <cmath>

namespace dyson {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// Uniform in (0, 1): 53 mantissa bits plus a half-ulp offset so log() is safe.
inline double to_open_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        std::uint64_t key) {
    std::array<std::uint32_t, 4> c = counter;
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, c[0], hi0, lo0);
        mulhilo(kPhiloxM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return c;
}

double NoiseStream::gaussian(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                             std::uint32_t c3) const {
    const auto w = philox4x32({c0, c1, c2, c3}, seed_);
    const std::uint64_t a = (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
    const std::uint64_t b = (static_cast<std::uint64_t>(w[2]) << 32) | w[3];
    const double u1 = to_open_unit(a);
    const double u2 = to_open_unit(b);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

double NoiseStream::brownian(std::uint32_t particle, std::uint32_t step,
                             std::uint64_t node) const {
    // domain tag 0 in the top byte of c3; node fits 41 bits for <= 40 halvings
    return gaussian(particle, step, static_cast<std::uint32_t>(node),
                    static_cast<std::uint32_t>(node >> 32) & 0x00FFFFFFu);
}

double NoiseStream::gue_entry(std::uint32_t step, std::uint32_t flat_index,
                              std::uint32_t component) const {
    return gaussian(flat_index, step, component, 0x01000000u);
}

}  // namespace dyson
