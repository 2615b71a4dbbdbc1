// spectral.hpp
// Fourier-multiplier operators on the uniform circle grid and the viscous
// Dyson density solver. Conventions (with c_n = int exp(-i n theta) u dtheta):
//   Hilbert transform  H : c_n -> -2pi i sign(n) c_n      (cot(./2) kernel)
//   half-Laplacian    A0 : c_n ->  2pi |n|      c_n       (A0 = H o d/dtheta)
// The solver integrates  d mu/dt = eps mu_xx - d(mu H[mu])/dx  with an
// ETD-RK2 step (exact integrating factor for the stiff eps n^2 part) and a
// 2/3-rule dealiased product.

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dyson/circle.hpp"

namespace dyson {

class SpectralWorkspace {
public:
    // grid_size must be a power of two.
    explicit SpectralWorkspace(std::size_t grid_size, double viscosity = 0.0);
    ~SpectralWorkspace();
    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    std::size_t grid_size() const { return grid_size_; }
    double viscosity() const { return viscosity_; }
    std::size_t dealias_cutoff() const { return grid_size_ / 3; }  // keep |n| <= M/3

    std::vector<std::complex<double>> forward(std::span<const double> u);  // r2c, M/2+1 bins
    std::vector<double> inverse(std::span<const std::complex<double>> spec);

    std::vector<double> hilbert(std::span<const double> u);
    std::vector<double> half_laplacian(std::span<const double> u);
    std::vector<double> derivative(std::span<const double> u);
    std::vector<double> second_derivative(std::span<const double> u);
    std::vector<double> dealias(std::span<const double> u);

private:
    struct Plans;
    std::size_t grid_size_;
    double viscosity_;
    std::unique_ptr<Plans> plans_;
};

std::vector<double> hilbert_transform(const PeriodicDensity& mu, SpectralWorkspace& ws);

// eps * mu'' - (mu H[mu])' with the product dealiased; the conservative form
// keeps mode 0 of the result identically zero.
std::vector<double> dyson_rhs(const PeriodicDensity& mu, SpectralWorkspace& ws);

struct DensitySolveOptions {
    double cfl = 0.35;
    double dt_max = 2e-3;
    std::size_t record_stride = 1;
    double positivity_floor = -1e-6;  // min-value monitor threshold
    double mass_tol = 1e-6;
};

struct DensityTrajectory {
    std::vector<double> times;
    std::vector<PeriodicDensity> states;
    double worst_minimum = 0.0;   // most negative grid value seen at any step
    std::uint64_t steps_taken = 0;
};

// March to total_time with adaptive dt <= cfl * dtheta / max|H[mu]| (also
// capped by the nonlocal damping rate); mode 0 is exact, so mass is pinned.
// A grid value below positivity_floor aborts with a positivity-loss error.
DensityTrajectory solve_density(const PeriodicDensity& initial, double total_time,
                                double viscosity, const DensitySolveOptions& opts = {});

}  // namespace dyson
