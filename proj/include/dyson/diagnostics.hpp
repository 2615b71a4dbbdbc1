// diagnostics.hpp
// Free entropy, its dissipation, Fourier spectra, Lp norms and the pass/fail
// envelope checks for density trajectories. The Hilbert transform here is the
// unnormalized cot(./2) convolution throughout; the dissipation constants are
//   dI/dt = -int H[mu]^2 mu = -(4 pi^2/3) (int mu^3 - 1/(4 pi^2)).

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dyson/circle.hpp"
#include "dyson/spectral.hpp"

namespace dyson {

// c_n = dtheta * sum_j exp(-i n theta_j) mu_j for |n| <= max_mode
// (spectrally accurate on the periodic grid). Requires max_mode < M/2; sets
// the aliasing flag when |c_{max_mode}| > 1e-6.
FourierCoefficients fourier_coefficients(const PeriodicDensity& mu, int max_mode);

// I(mu) = (1/2) sum_{n != 0} |c_n|^2 / |n|, truncated at max_mode.
double free_entropy(const PeriodicDensity& mu, int max_mode);

// Size of the last retained term, |c_{max_mode}|^2 / max_mode; a tail bound
// for the truncation above.
double free_entropy_tail(const PeriodicDensity& mu, int max_mode);

// The same functional from the log-kernel double integral
//   -(1/(2pi)^0) iint ln|sin((x-y)/2)| mu mu - ln 2,
// quadrature with the singular diagonal replaced by the exact discrete
// weight -ln(2M) (which reproduces ln|sin|*uniform = -ln 2 identically).
double free_entropy_log_kernel(const PeriodicDensity& mu);

struct DissipationPair {
    double hilbert_form = 0.0;  // int (H[mu])^2 mu dtheta
    double cubic_form = 0.0;    // (4 pi^2/3) (int mu^3 dtheta - 1/(4 pi^2))
};
DissipationPair entropy_dissipation(const PeriodicDensity& mu, SpectralWorkspace& ws);

// A0 quadrature of a plain periodic grid function (no winding).
double a0_of_values(std::span<const double> values, std::size_t node);

struct InequalityCheck {
    std::string name;
    double lhs = 0.0;  // oriented so that lhs >= rhs is the claim
    double rhs = 0.0;
    double slack() const { return lhs - rhs; }
};

// Pointwise lower bounds at the extrema: the Constantin-Vicol bound, the
// cotangent amplitude bound, and the derivative/Hilbert bounds for
// g = d mu/dtheta. All slacks must be >= -1e-6.
std::vector<InequalityCheck> lower_bound_checks(const PeriodicDensity& mu,
                                                SpectralWorkspace& ws);

struct BoundSeries {
    std::vector<double> t;
    std::vector<double> maximum, minimum, amplitude;
    std::vector<double> entropy, dissipation, derivative_max, mass;
    std::map<int, std::vector<double>> lp;  // p -> ||mu||_p series
};

struct BoundCheck {
    std::string name;
    bool passed = true;
    double worst_margin = 0.0;  // minimum slack over the run (>= 0 iff passed)
    double worst_time = 0.0;
};

struct BoundReport {
    BoundSeries series;
    std::vector<BoundCheck> bounds;
    bool all_passed() const;
};

struct BoundReportOptions {
    std::vector<int> lp_orders{2, 3, 5};
    int entropy_modes = 0;            // 0: use the dealias cutoff
    double viscosity = 0.0;           // epsilon of the solve; the dissipation
                                      // identity includes its exact entropy
                                      // flux 2 eps sum n |c_n|^2
    double envelope_rel_tol = 1e-2;   // slack on theoretical envelopes
    double step_tol = 1e-6;           // per-step max/min monotonicity
    double lp_step_tol = 1e-8;        // per-step Lp decay
    double entropy_step_tol = 1e-8;   // per-step entropy decay
    double mass_tol = 1e-12;
    double dissipation_rel_tol = 1e-3;
    double regularization_t_min = 0.05;  // L-infinity envelope window start
    double longtime_t_min = 0.5;         // long-time envelope window start
    double derivative_anchor = 0.2;      // fit time for the decay constant
};

BoundReport bound_report(const DensityTrajectory& trajectory,
                         const BoundReportOptions& opts = {});

// {bounds: [{name, passed, worst_margin, worst_time}], series_file} plus a
// CSV of all series (t, M, m, V, I, D, lp_*, dmax, mass).
void write_report_json(const BoundReport& report, const std::string& json_path,
                       const std::string& series_csv_name);
void write_series_csv(const BoundReport& report, const std::string& csv_path);

}  // namespace dyson
