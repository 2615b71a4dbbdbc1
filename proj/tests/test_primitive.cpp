#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dyson/circle.hpp"
#include "dyson/primitive.hpp"
#include "dyson/spectral.hpp"

using namespace dyson;

namespace {

PseudoCDF random_cdf(std::mt19937& rng, std::size_t m) {
    // cumulative sum of a random positive trigonometric density
    std::uniform_real_distribution<double> amp(-0.2, 0.2);
    std::vector<double> a(5), b(5);
    for (int n = 1; n <= 4; ++n) {
        a[n] = amp(rng);
        b[n] = amp(rng);
    }
    PeriodicDensity mu;
    mu.values.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
        double v = 1.0;
        for (int n = 1; n <= 4; ++n) v += a[n] * std::cos(n * th) + b[n] * std::sin(n * th);
        mu.values[j] = v / kTwoPi;
    }
    const double mass = mu.mass();
    for (double& v : mu.values) v /= mass;
    return cumulative_cdf(mu);
}

}  // namespace

TEST_CASE("a0 quadrature on the affine kernel is exactly zero") {
    const auto f = uniform_cdf(64);
    for (std::size_t j = 0; j < 64; ++j) CHECK(a0_quadrature(f, j) == 0.0);
}

TEST_CASE("a0 quadrature against the spectral multiplier") {
    // F = theta/2pi + sin(theta)/4pi: exact A0 of the sin part is sin/2
    const std::size_t m = 256;
    const auto f = tabulate_cdf(m, [](double th) { return th / kTwoPi + std::sin(th) / (2.0 * kTwoPi); });
    for (std::size_t j = 0; j < m; j += 7) {
        const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
        CHECK(std::abs(a0_quadrature(f, j) - 0.5 * std::sin(th)) <= 0.02);
    }
}

TEST_CASE("a0 is of positive type at local maxima of the deviation") {
    // deviation from the affine ramp peaks at pi/2 (node m/4)
    const std::size_t m = 128;
    const auto f = tabulate_cdf(m, [](double th) { return th / kTwoPi + 0.02 * std::sin(th) / kTwoPi; });
    CHECK(a0_quadrature(f, m / 4) >= 0.0);
}

TEST_CASE("a0 split recombines to the full quadrature") {
    std::mt19937 rng(3);
    const auto f = random_cdf(rng, 128);
    for (std::size_t j = 0; j < 128; j += 11) {
        const auto [near, far] = a0_split(f, j, 0.5);
        CHECK(near + far == doctest::Approx(a0_quadrature(f, j)).epsilon(1e-12));
    }
}

TEST_CASE("uniform CDF is a fixed point of the scheme") {
    PrimitiveState state{uniform_cdf(128), 0.0};
    for (int k = 0; k < 20; ++k) {
        state = primitive_step(state, 1e-3);
        for (std::size_t j = 0; j < 128; ++j)
            CHECK(state.grid.values[j] == uniform_cdf(128).values[j]);
    }
}

TEST_CASE("CFL violations are rejected with a suggestion") {
    std::mt19937 rng(5);
    PrimitiveState state{random_cdf(rng, 128), 0.0};
    const double limit = primitive_cfl_dt(state.grid);
    CHECK_THROWS_WITH_AS(primitive_step(state, 10.0 * limit),
                         doctest::Contains("retry with dt"), std::invalid_argument);
}

TEST_CASE("winding and monotonicity survive an atomic initial datum") {
    // grid step of height 1: one atom at pi
    PseudoCDF atom;
    atom.values.assign(128, 0.0);
    for (std::size_t j = 64; j < 128; ++j) atom.values[j] = 1.0;
    atom.winding = 1.0;
    PrimitiveState state{atom, 0.0};
    for (int k = 0; k < 100; ++k) {
        const double dt = 0.9 * primitive_cfl_dt(state.grid);
        state = primitive_step(state, dt);
        CHECK(state.grid.winding == 1.0);
        for (std::size_t j = 0; j + 1 < 128; ++j)
            CHECK(state.grid.values[j] <= state.grid.values[j + 1]);
    }
    CHECK(state.time > 0.0);
}

TEST_CASE("discrete comparison principle is exact") {
    std::mt19937 rng(7);
    for (int pair = 0; pair < 50; ++pair) {
        const auto f1 = random_cdf(rng, 64);
        const auto f2 = random_cdf(rng, 64);
        PseudoCDF lower, upper;
        lower.values.resize(64);
        upper.values.resize(64);
        lower.winding = upper.winding = 1.0;
        for (std::size_t j = 0; j < 64; ++j) {
            lower.values[j] = std::min(f1.values[j], f2.values[j]);
            upper.values[j] = std::max(f1.values[j], f2.values[j]);
        }
        lower.validate();
        upper.validate();
        PrimitiveState a{lower, 0.0}, b{upper, 0.0};
        for (int k = 0; k < 40; ++k) {
            const double dt = 0.9 * std::min(primitive_cfl_dt(a.grid), primitive_cfl_dt(b.grid));
            a = primitive_step(a, dt);
            b = primitive_step(b, dt);
            for (std::size_t j = 0; j < 64; ++j)
                CHECK(a.grid.values[j] <= b.grid.values[j]);
        }
    }
}

TEST_CASE("translation equivariance on grid shifts") {
    std::mt19937 rng(9);
    const auto f = random_cdf(rng, 128);
    const std::size_t shift = 17;
    PseudoCDF g;  // g(theta) = f(theta - shift*dtheta), via the winding extension
    g.winding = f.winding;
    g.values.resize(128);
    for (std::size_t j = 0; j < 128; ++j)
        g.values[j] = f.node(static_cast<long long>(j) - static_cast<long long>(shift));
    PrimitiveState a{f, 0.0}, b{g, 0.0};
    for (int k = 0; k < 50; ++k) {
        const double dt = 0.9 * std::min(primitive_cfl_dt(a.grid), primitive_cfl_dt(b.grid));
        a = primitive_step(a, dt);
        b = primitive_step(b, dt);
    }
    for (std::size_t j = 0; j < 128; ++j) {
        const double shifted = a.grid.node(static_cast<long long>(j) - static_cast<long long>(shift));
        CHECK(b.grid.values[j] == doctest::Approx(shifted).epsilon(1e-13));
    }
}

TEST_CASE("solve_primitive fixed point and self-convergence") {
    {
        const auto traj = solve_primitive(uniform_cdf(64), 0.3);
        for (const auto& state : traj.states)
            for (std::size_t j = 0; j < 64; ++j)
                CHECK(state.values[j] == uniform_cdf(64).values[j]);
    }
    {
        auto datum = [](std::size_t m) {
            return tabulate_cdf(m, [](double th) { return (th + std::sin(th)) / kTwoPi; });
        };
        const auto c = solve_primitive(datum(128), 0.5).states.back();
        const auto f = solve_primitive(datum(256), 0.5).states.back();
        const auto ff = solve_primitive(datum(512), 0.5).states.back();
        double d_cf = 0.0, d_fff = 0.0;
        for (std::size_t j = 0; j < 128; ++j)
            d_cf = std::max(d_cf, std::abs(c.values[j] - f.values[2 * j]));
        for (std::size_t j = 0; j < 256; ++j)
            d_fff = std::max(d_fff, std::abs(f.values[j] - ff.values[2 * j]));
        CHECK(d_fff < d_cf);
    }
}

TEST_CASE("primitive and density channels agree on smooth data") {
    const std::size_t m = 256;
    const auto f0 = tabulate_cdf(m, [](double th) { return (th + std::sin(th)) / kTwoPi; });
    const auto primitive = solve_primitive(f0, 1.0).states.back();

    PeriodicDensity mu;
    mu.values.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
        mu.values[j] = (1.0 + std::cos(th)) / kTwoPi;
    }
    const auto density = solve_density(mu, 1.0, 0.5 * kTwoPi / static_cast<double>(m));
    const auto cumulative = cumulative_cdf(density.states.back());
    // even data: the flux through the base point vanishes, so the fixed-base
    // cumulative and the primitive solution share the same constant
    double sup = 0.0;
    for (std::size_t j = 0; j < m; ++j)
        sup = std::max(sup, std::abs(primitive.values[j] - cumulative.values[j]));
    CHECK(sup <= 0.02);
}
