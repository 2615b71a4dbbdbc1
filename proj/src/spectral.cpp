#include "dyson/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dyson {

struct SpectralWorkspace::Plans {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    double* real_buf = nullptr;
    fftw_complex* spec_buf = nullptr;
    std::size_t m = 0;

    explicit Plans(std::size_t grid) : m(grid) {
        real_buf = fftw_alloc_real(m);
        spec_buf = fftw_alloc_complex(m / 2 + 1);
        forward = fftw_plan_dft_r2c_1d(static_cast<int>(m), real_buf, spec_buf, FFTW_ESTIMATE);
        inverse = fftw_plan_dft_c2r_1d(static_cast<int>(m), spec_buf, real_buf, FFTW_ESTIMATE);
        if (!forward || !inverse) throw std::runtime_error("SpectralWorkspace: FFTW plan failed");
    }
    ~Plans() {
        if (forward) fftw_destroy_plan(forward);
        if (inverse) fftw_destroy_plan(inverse);
        fftw_free(real_buf);
        fftw_free(spec_buf);
    }
};

SpectralWorkspace::SpectralWorkspace(std::size_t grid_size, double viscosity)
    : grid_size_(grid_size), viscosity_(viscosity) {
    if (grid_size < 8 || (grid_size & (grid_size - 1)) != 0)
        throw std::invalid_argument("SpectralWorkspace: grid size must be a power of two >= 8");
    if (viscosity < 0.0)
        throw std::invalid_argument("SpectralWorkspace: viscosity must be >= 0");
    plans_ = std::make_unique<Plans>(grid_size);
}

SpectralWorkspace::~SpectralWorkspace() = default;

std::vector<std::complex<double>> SpectralWorkspace::forward(std::span<const double> u) {
    if (u.size() != grid_size_) throw std::invalid_argument("forward: wrong grid size");
    std::copy(u.begin(), u.end(), plans_->real_buf);
    fftw_execute(plans_->forward);
    const std::size_t bins = grid_size_ / 2 + 1;
    std::vector<std::complex<double>> spec(bins);
    for (std::size_t k = 0; k < bins; ++k)
        spec[k] = {plans_->spec_buf[k][0], plans_->spec_buf[k][1]};
    return spec;
}

std::vector<double> SpectralWorkspace::inverse(std::span<const std::complex<double>> spec) {
    const std::size_t bins = grid_size_ / 2 + 1;
    if (spec.size() != bins) throw std::invalid_argument("inverse: wrong spectrum size");
    for (std::size_t k = 0; k < bins; ++k) {
        plans_->spec_buf[k][0] = spec[k].real();
        plans_->spec_buf[k][1] = spec[k].imag();
    }
    fftw_execute(plans_->inverse);
    std::vector<double> u(grid_size_);
    const double scale = 1.0 / static_cast<double>(grid_size_);
    for (std::size_t j = 0; j < grid_size_; ++j) u[j] = plans_->real_buf[j] * scale;
    return u;
}

namespace {

enum class Multiplier { Hilbert, HalfLaplacian, Derivative, SecondDerivative, Dealias };

void apply_multiplier(std::vector<std::complex<double>>& spec, Multiplier which,
                      std::size_t cutoff) {
    const std::size_t bins = spec.size();
    for (std::size_t k = 0; k < bins; ++k) {
        const double n = static_cast<double>(k);
        switch (which) {
            case Multiplier::Hilbert:
                // -2pi i sign(n); mode 0 annihilated, Nyquist dropped
                spec[k] = (k == 0 || k == bins - 1)
                              ? std::complex<double>{}
                              : std::complex<double>(0.0, -kTwoPi) * spec[k];
                break;
            case Multiplier::HalfLaplacian:
                spec[k] = (k == bins - 1) ? std::complex<double>{} : kTwoPi * n * spec[k];
                break;
            case Multiplier::Derivative:
                spec[k] = (k == bins - 1) ? std::complex<double>{}
                                          : std::complex<double>(0.0, n) * spec[k];
                break;
            case Multiplier::SecondDerivative:
                spec[k] = -n * n * spec[k];
                break;
            case Multiplier::Dealias:
                if (k > cutoff) spec[k] = {};
                break;
        }
    }
}

}  // namespace

std::vector<double> SpectralWorkspace::hilbert(std::span<const double> u) {
    auto spec = forward(u);
    apply_multiplier(spec, Multiplier::Hilbert, dealias_cutoff());
    return inverse(spec);
}

std::vector<double> SpectralWorkspace::half_laplacian(std::span<const double> u) {
    auto spec = forward(u);
    apply_multiplier(spec, Multiplier::HalfLaplacian, dealias_cutoff());
    return inverse(spec);
}

std::vector<double> SpectralWorkspace::derivative(std::span<const double> u) {
    auto spec = forward(u);
    apply_multiplier(spec, Multiplier::Derivative, dealias_cutoff());
    return inverse(spec);
}

std::vector<double> SpectralWorkspace::second_derivative(std::span<const double> u) {
    auto spec = forward(u);
    apply_multiplier(spec, Multiplier::SecondDerivative, dealias_cutoff());
    return inverse(spec);
}

std::vector<double> SpectralWorkspace::dealias(std::span<const double> u) {
    auto spec = forward(u);
    apply_multiplier(spec, Multiplier::Dealias, dealias_cutoff());
    return inverse(spec);
}

std::vector<double> hilbert_transform(const PeriodicDensity& mu, SpectralWorkspace& ws) {
    return ws.hilbert(mu.values);
}

namespace {

// Spectrum of -(mu_d * H[mu_d])', both factors dealiased, result dealiased.
std::vector<std::complex<double>> transport_term(SpectralWorkspace& ws,
                                                 const std::vector<std::complex<double>>& spec) {
    auto spec_d = spec;
    apply_multiplier(spec_d, Multiplier::Dealias, ws.dealias_cutoff());
    auto spec_h = spec_d;
    apply_multiplier(spec_h, Multiplier::Hilbert, ws.dealias_cutoff());
    const auto mu_d = ws.inverse(spec_d);
    const auto h_d = ws.inverse(spec_h);
    std::vector<double> flux(ws.grid_size());
    for (std::size_t j = 0; j < flux.size(); ++j) flux[j] = mu_d[j] * h_d[j];
    auto out = ws.forward(flux);
    apply_multiplier(out, Multiplier::Derivative, ws.dealias_cutoff());
    apply_multiplier(out, Multiplier::Dealias, ws.dealias_cutoff());
    for (auto& z : out) z = -z;
    return out;
}

double phi1(double z) {
    if (std::abs(z) < 1e-3) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
    return std::expm1(z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 1e-3) return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0));
    return (std::expm1(z) - z) / (z * z);
}

}  // namespace

std::vector<double> dyson_rhs(const PeriodicDensity& mu, SpectralWorkspace& ws) {
    auto spec = ws.forward(mu.values);
    auto rhs = transport_term(ws, spec);
    const double eps = ws.viscosity();
    for (std::size_t k = 0; k < rhs.size(); ++k) {
        const double n = static_cast<double>(k);
        rhs[k] += -eps * n * n * spec[k];
    }
    return ws.inverse(rhs);
}

DensityTrajectory solve_density(const PeriodicDensity& initial, double total_time,
                                double viscosity, const DensitySolveOptions& opts) {
    const std::size_t m = initial.grid_size();
    SpectralWorkspace ws(m, viscosity);
    if (std::abs(initial.mass() - 1.0) > opts.mass_tol)
        throw std::invalid_argument("solve_density: initial mass must be 1");

    auto spec = ws.forward(initial.values);
    apply_multiplier(spec, Multiplier::Dealias, ws.dealias_cutoff());
    PeriodicDensity state;
    state.values = ws.inverse(spec);

    DensityTrajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(state);
    traj.worst_minimum = state.minimum();
    if (total_time <= 0.0) return traj;

    const double dtheta = kTwoPi / static_cast<double>(m);
    const std::size_t bins = m / 2 + 1;
    double t = 0.0;
    std::uint64_t step = 0;
    std::vector<double> e_factor(bins), f1(bins), f2(bins);

    while (t < total_time) {
        const auto h_field = ws.hilbert(state.values);
        double h_max = 1e-12;
        for (double h : h_field) h_max = std::max(h_max, std::abs(h));
        // transport CFL plus the nonlocal damping rate max(mu) * 2pi * n_cut
        const double damping =
            2.0 / std::max(1e-12, state.maximum() * kTwoPi *
                                       static_cast<double>(ws.dealias_cutoff()));
        double dt = std::min({opts.dt_max, opts.cfl * dtheta / h_max, opts.cfl * damping});
        dt = std::min(dt, total_time - t);

        for (std::size_t k = 0; k < bins; ++k) {
            const double z = -viscosity * static_cast<double>(k) * static_cast<double>(k) * dt;
            e_factor[k] = std::exp(z);
            f1[k] = dt * phi1(z);
            f2[k] = dt * phi2(z);
        }

        const auto n1 = transport_term(ws, spec);
        std::vector<std::complex<double>> stage(bins);
        for (std::size_t k = 0; k < bins; ++k) stage[k] = e_factor[k] * spec[k] + f1[k] * n1[k];
        const auto n2 = transport_term(ws, stage);
        for (std::size_t k = 0; k < bins; ++k) spec[k] = stage[k] + f2[k] * (n2[k] - n1[k]);

        state.values = ws.inverse(spec);
        t += dt;
        ++step;
        const double mn = state.minimum();
        traj.worst_minimum = std::min(traj.worst_minimum, mn);
        if (mn < opts.positivity_floor) {
            std::ostringstream msg;
            msg << "solve_density: positivity lost (min " << mn << " at t " << t
                << "); use a larger viscosity or a finer grid";
            throw std::runtime_error(msg.str());
        }
        if (step % opts.record_stride == 0 || t >= total_time) {
            traj.times.push_back(t);
            traj.states.push_back(state);
        }
    }
    traj.steps_taken = step;
    return traj;
}

}  // namespace dyson
