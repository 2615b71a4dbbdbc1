#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "dyson/circle.hpp"

using namespace dyson;

TEST_CASE("wrap_angle canonical representatives") {
    CHECK(wrap_angle(0.0).radians == 0.0);
    CHECK(wrap_angle(kTwoPi).radians == 0.0);
    CHECK(wrap_angle(-0.5 * kPi).radians == doctest::Approx(1.5 * kPi).epsilon(1e-15));
    CHECK_THROWS_AS(wrap_angle(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(wrap_angle(INFINITY), std::domain_error);
}

TEST_CASE("wrap_angle periodicity over large multiples") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    const long long ks[] = {1, -1, 17, -123, 4096, -99991, 1000000, -1000000};
    for (int trial = 0; trial < 200; ++trial) {
        const double x = angle(rng);
        for (long long k : ks) {
            const double shifted = x + kTwoPi * static_cast<double>(k);
            // 4 ulp at the scale of the shifted argument, folded back to [0,2pi)
            const double tol = 4.0 * std::abs(shifted) * 0x1.0p-52 + 4.0 * 0x1.0p-52;
            const double got = wrap_angle(shifted).radians;
            const double diff = std::min(std::abs(got - x), kTwoPi - std::abs(got - x));
            CHECK(diff <= tol);
        }
    }
}

TEST_CASE("lift_configuration windows and ordering") {
    {
        const double raw[] = {0.0, kPi};
        const auto config = lift_configuration(std::span<const double>(raw), 0.0);
        CHECK(config.positions()[0] == 0.0);
        CHECK(config.positions()[1] == kPi);
    }
    {
        const double raw[] = {1.5 * kPi, 0.5 * kPi};
        const auto config = lift_configuration(std::span<const double>(raw), 0.0);
        CHECK(config.positions()[0] == doctest::Approx(0.5 * kPi));
        CHECK(config.positions()[1] == doctest::Approx(1.5 * kPi));
    }
    {
        // window [pi/4, pi/4 + 2pi): 0 maps to 2pi, pi stays
        const double raw[] = {0.0, kPi};
        const auto config = lift_configuration(std::span<const double>(raw), 0.25 * kPi);
        CHECK(config.positions()[0] == doctest::Approx(kPi));
        CHECK(config.positions()[1] == doctest::Approx(kTwoPi));
    }
    {
        // exact-comparison tie rule: identical representatives collide
        const double raw[] = {0.3, 0.3};
        CHECK_THROWS_AS(lift_configuration(std::span<const double>(raw), 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("relift shifts positions by whole turns") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> raw(6);
        for (double& a : raw) a = angle(rng);
        std::sort(raw.begin(), raw.end());
        bool distinct = true;
        for (std::size_t i = 0; i + 1 < raw.size(); ++i)
            if (raw[i + 1] - raw[i] < 1e-6) distinct = false;
        if (!distinct || raw.front() + kTwoPi - raw.back() < 1e-6) continue;
        const auto base = lift_configuration(std::span<const double>(raw), 0.0);
        for (int k : {-3, -1, 1, 2}) {
            const auto moved = base.relift(kTwoPi * k);
            for (std::size_t i = 0; i < raw.size(); ++i)
                CHECK(moved.positions()[i] ==
                      doctest::Approx(base.positions()[i] + kTwoPi * k).epsilon(1e-14));
        }
    }
}

TEST_CASE("periodic extension is computed on demand") {
    const double raw[] = {0.5, 2.0, 4.0};
    const auto config = lift_configuration(std::span<const double>(raw), 0.0);
    CHECK(config.position(0) == 0.5);
    CHECK(config.position(3) == doctest::Approx(0.5 + kTwoPi));
    CHECK(config.position(-1) == doctest::Approx(4.0 - kTwoPi));
    CHECK(config.position(7) == doctest::Approx(2.0 + 2.0 * kTwoPi));
    CHECK(config.min_gap() == doctest::Approx(1.5));
}

TEST_CASE("empirical_cdf counts atoms and winds") {
    {
        const double raw[] = {0.0};
        const auto config = lift_configuration(std::span<const double>(raw), 0.0);
        CHECK(empirical_cdf(config, 0.0) == 1.0);  // atom on [0,0], right continuous
    }
    {
        const double raw[] = {0.5 * kPi, 1.5 * kPi};
        const auto config = lift_configuration(std::span<const double>(raw), 0.0);
        CHECK(empirical_cdf(config, kPi) == 0.5);
    }
    {
        const double raw[] = {0.3, 1.1, 2.9, 4.4};
        const auto config = lift_configuration(std::span<const double>(raw), 0.0);
        for (double theta : {0.0, 0.2999, 1.2, 5.0}) {
            CHECK(empirical_cdf(config, theta + kTwoPi) - empirical_cdf(config, theta) ==
                  doctest::Approx(1.0).epsilon(1e-15));
        }
        double prev = empirical_cdf(config, 0.0);
        for (int j = 1; j <= 200; ++j) {
            const double f = empirical_cdf(config, kTwoPi * j / 200.0);
            CHECK(f >= prev);
            prev = f;
        }
    }
}

TEST_CASE("cdf_distance is the sup over grid nodes") {
    PseudoCDF uniform = uniform_cdf(4);
    CHECK(cdf_distance(uniform, uniform) == 0.0);

    PseudoCDF offset = uniform;
    for (double& v : offset.values) v += 0.1;
    CHECK(cdf_distance(uniform, offset) == doctest::Approx(0.1));

    // one atom whose jump sits at the period boundary: F = 0 on [0, 2pi)
    PseudoCDF atom;
    atom.values.assign(4, 0.0);
    atom.winding = 1.0;
    double brute = 0.0;
    for (std::size_t j = 0; j < 4; ++j)
        brute = std::max(brute, std::abs(uniform.values[j] - atom.values[j]));
    CHECK(brute == doctest::Approx(0.75));
    CHECK(cdf_distance(uniform, atom) == doctest::Approx(0.75));

    PseudoCDF wrong_size = uniform_cdf(8);
    CHECK_THROWS_AS(cdf_distance(uniform, wrong_size), std::invalid_argument);
}

TEST_CASE("pseudo-CDF winding extension and validation") {
    PseudoCDF f = uniform_cdf(8);
    f.validate();
    CHECK(f.node(8) == doctest::Approx(1.0));
    CHECK(f.node(-1) == doctest::Approx(7.0 / 8.0 - 1.0));
    CHECK(f.node(17) == doctest::Approx(1.0 / 8.0 + 2.0));

    PseudoCDF bad = f;
    bad.values[3] = bad.values[2] - 0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("density mass and cumulative map") {
    const auto uniform = PeriodicDensity::uniform(64);
    CHECK(uniform.mass() == doctest::Approx(1.0).epsilon(1e-15));

    PeriodicDensity cosine;
    cosine.values.resize(128);
    for (std::size_t j = 0; j < 128; ++j)
        cosine.values[j] = (1.0 + std::cos(cosine.node_angle(j))) / kTwoPi;
    CHECK(cosine.mass() == doctest::Approx(1.0).epsilon(1e-14));

    const auto cdf = cumulative_cdf(cosine);
    cdf.validate();
    CHECK(cdf.winding == doctest::Approx(1.0).epsilon(1e-14));
    // trapezoid partial sums track the analytic primitive (theta + sin theta)/2pi
    for (std::size_t j = 0; j < 128; j += 13) {
        const double th = cosine.node_angle(j);
        CHECK(cdf.values[j] ==
              doctest::Approx((th + std::sin(th)) / kTwoPi).epsilon(1e-4));
    }
}
