// circle.hpp
// Shared geometry on the circle T = R/2piZ: canonical angles, strictly
// ordered lifts with their implicit 2pi-periodic extension, pseudo-CDFs
// (F(theta + 2pi) = F(theta) + winding) and grid densities. Everything here
// is an immutable value after construction.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dyson {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Angle {
    double radians = 0.0;  // canonical representative in [0, 2pi)
};

// Reduce x modulo 2pi into [0, 2pi). Throws std::domain_error on non-finite
// input.
Angle wrap_angle(double x);

// Same reduction into the half-open window [reference, reference + 2pi).
double wrap_into_window(double x, double reference);

// N strictly ordered reals with
//   reference <= p[0] < p[1] < ... < p[N-1] < reference + 2pi.
// Indices outside [0, N) refer to the periodic extension
//   p[i] = p[i mod N] + 2pi * floor(i / N),
// which is never stored, only computed on demand.
class LiftedConfiguration {
public:
    // Takes ownership of already-ordered positions; validates the invariant.
    LiftedConfiguration(std::vector<double> positions, double reference);

    std::size_t count() const { return positions_.size(); }
    double reference() const { return reference_; }
    const std::vector<double>& positions() const { return positions_; }

    // Periodic extension, i in Z.
    double position(long long i) const;

    // Smallest gap between circular neighbours, including the wrap pair
    // p[0] + 2pi - p[N-1]. Equals 2pi for a single particle.
    double min_gap() const;

    // The same point set re-lifted into [new_reference, new_reference + 2pi).
    LiftedConfiguration relift(double new_reference) const;

    // Positions shifted by a constant (lift window moves along).
    LiftedConfiguration shifted(double c) const;

private:
    std::vector<double> positions_;
    double reference_ = 0.0;
};

// Map each angle to its unique representative in [reference, reference+2pi)
// and sort. Duplicate angles modulo 2pi are a collision error.
LiftedConfiguration lift_configuration(std::span<const Angle> angles, double reference);
LiftedConfiguration lift_configuration(std::span<const double> angles, double reference);

// Empirical pseudo-CDF of the configuration seen as N unit atoms on the
// circle: for theta in [0, 2pi), F(theta) = #{particles on [0, theta]}/N
// (right continuous), extended by F(theta + 2pi) = F(theta) + 1.
double empirical_cdf(const LiftedConfiguration& config, double theta);

// Grid function F at the nodes theta_j = 2pi j / M with
// F(theta + 2pi) = F(theta) + winding; winding = 1 for probability measures.
struct PseudoCDF {
    std::vector<double> values;
    double winding = 1.0;

    std::size_t grid_size() const { return values.size(); }
    // Winding extension, j in Z.
    double node(long long j) const;
    // Nondecreasing across one period and consistent at the wrap.
    void validate() const;
};

// Sup distance over grid nodes. Mismatched grids are a shape error.
double cdf_distance(const PseudoCDF& a, const PseudoCDF& b);

// Nonnegative samples at theta_j = 2pi j / M of a density on the circle.
struct PeriodicDensity {
    std::vector<double> values;

    std::size_t grid_size() const { return values.size(); }
    double node_angle(std::size_t j) const;
    // Rectangle quadrature (= trapezoid on the periodic grid), target 1.
    double mass() const;
    double maximum() const;
    double minimum() const;

    static PeriodicDensity uniform(std::size_t grid_size);
};

// Trapezoid partial sums of a density: F_0 = 0, winding = mass.
PseudoCDF cumulative_cdf(const PeriodicDensity& density);

// PseudoCDF of the uniform density, F(theta) = theta / 2pi.
PseudoCDF uniform_cdf(std::size_t grid_size);

// Sample of a pseudo-CDF (winding 1) at the grid nodes from a callable
// F: R -> R; the caller guarantees monotonicity.
template <typename F>
PseudoCDF tabulate_cdf(std::size_t grid_size, F&& f) {
    PseudoCDF out;
    out.values.resize(grid_size);
    for (std::size_t j = 0; j < grid_size; ++j)
        out.values[j] = f(kTwoPi * static_cast<double>(j) / static_cast<double>(grid_size));
    out.winding = 1.0;
    out.validate();
    return out;
}

// Fourier data c_n = int_T exp(-i n theta) mu(theta) dtheta for |n| <= max_mode.
// Real densities satisfy c_{-n} = conj(c_n) and c_0 = mass.
struct FourierCoefficients {
    int max_mode = 0;
    std::vector<std::complex<double>> coefficients;  // index n + max_mode
    bool aliasing_warning = false;                   // |c_{max_mode}| > 1e-6

    std::complex<double> mode(int n) const;
};

}  // namespace dyson
