#include "dyson/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dyson {

FourierCoefficients fourier_coefficients(const PeriodicDensity& mu, int max_mode) {
    const std::size_t m = mu.grid_size();
    if (max_mode < 0 || static_cast<std::size_t>(max_mode) >= m / 2)
        throw std::invalid_argument("fourier_coefficients: need 0 <= max_mode < M/2");
    const double dtheta = kTwoPi / static_cast<double>(m);
    FourierCoefficients out;
    out.max_mode = max_mode;
    out.coefficients.assign(2 * static_cast<std::size_t>(max_mode) + 1, {});
    for (int n = 0; n <= max_mode; ++n) {
        std::complex<double> acc{};
        for (std::size_t j = 0; j < m; ++j) {
            const double phase = -static_cast<double>(n) * mu.node_angle(j);
            acc += std::polar(mu.values[j], phase);
        }
        acc *= dtheta;
        out.coefficients[static_cast<std::size_t>(max_mode + n)] = acc;
        out.coefficients[static_cast<std::size_t>(max_mode - n)] = std::conj(acc);
    }
    out.aliasing_warning = max_mode > 0 && std::abs(out.mode(max_mode)) > 1e-6;
    return out;
}

double free_entropy(const PeriodicDensity& mu, int max_mode) {
    const auto coeffs = fourier_coefficients(mu, max_mode);
    double s = 0.0;
    for (int n = 1; n <= max_mode; ++n)
        s += std::norm(coeffs.mode(n)) / static_cast<double>(n);
    return s;  // (1/2) * both signs
}

double free_entropy_tail(const PeriodicDensity& mu, int max_mode) {
    const auto coeffs = fourier_coefficients(mu, max_mode);
    return std::norm(coeffs.mode(max_mode)) / static_cast<double>(std::max(1, max_mode));
}

double free_entropy_log_kernel(const PeriodicDensity& mu) {
    const std::size_t m = mu.grid_size();
    const double dtheta = kTwoPi / static_cast<double>(m);
    // kernel(d) = ln|sin(pi d / M)|, with the diagonal replaced by -ln(2M) so
    // that the quadrature of ln|sin(./2)| * uniform is exactly -ln 2
    std::vector<double> kernel(m);
    kernel[0] = -std::log(2.0 * static_cast<double>(m));
    for (std::size_t d = 1; d < m; ++d)
        kernel[d] = std::log(std::abs(std::sin(kPi * static_cast<double>(d) / static_cast<double>(m))));
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double conv = 0.0;
        for (std::size_t k = 0; k < m; ++k)
            conv += kernel[(j + m - k) % m] * mu.values[k];
        acc += conv * mu.values[j];
    }
    // the ln 2 constant scales with the squared mass, so signed zero-mass
    // inputs (differences of densities) evaluate to the pure quadratic form
    const double mass = mu.mass();
    return -acc * dtheta * dtheta - std::log(2.0) * mass * mass;
}

DissipationPair entropy_dissipation(const PeriodicDensity& mu, SpectralWorkspace& ws) {
    const std::size_t m = mu.grid_size();
    const double dtheta = kTwoPi / static_cast<double>(m);
    const auto h = ws.hilbert(mu.values);
    DissipationPair d;
    double cubic = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        d.hilbert_form += h[j] * h[j] * mu.values[j];
        cubic += mu.values[j] * mu.values[j] * mu.values[j];
    }
    d.hilbert_form *= dtheta;
    d.cubic_form = (4.0 * kPi * kPi / 3.0) * (cubic * dtheta - 1.0 / (4.0 * kPi * kPi));
    return d;
}

double a0_of_values(std::span<const double> values, std::size_t node) {
    const std::size_t m = values.size();
    const double dtheta = kTwoPi / static_cast<double>(m);
    double acc = 0.0;
    const double fj = values[node];
    for (std::size_t k = 1; k < m; ++k) {
        const double s = std::sin(0.5 * static_cast<double>(k) * dtheta);
        const double w = dtheta / (4.0 * s * s);
        acc += w * (2.0 * fj - values[(node + m - k) % m] - values[(node + k) % m]);
    }
    return acc;
}

std::vector<InequalityCheck> lower_bound_checks(const PeriodicDensity& mu,
                                                SpectralWorkspace& ws) {
    const std::size_t m = mu.grid_size();
    const double dtheta = kTwoPi / static_cast<double>(m);
    std::vector<InequalityCheck> checks;

    const auto argmax = static_cast<std::size_t>(
        std::max_element(mu.values.begin(), mu.values.end()) - mu.values.begin());
    const auto argmin = static_cast<std::size_t>(
        std::min_element(mu.values.begin(), mu.values.end()) - mu.values.begin());
    const double big = mu.values[argmax];
    const double small = mu.values[argmin];
    double l1 = 0.0;
    for (double v : mu.values) l1 += std::abs(v) * dtheta;
    const double mean = mu.mass() / kTwoPi;

    const double a0_max = a0_of_values(mu.values, argmax);
    const double a0_min = a0_of_values(mu.values, argmin);

    checks.push_back({"constantin_vicol_max", a0_max,
                      2.0 / (kPi * kPi) * (kTwoPi * big - l1)});
    checks.push_back({"constantin_vicol_min",
                      2.0 / (kPi * kPi) * (kTwoPi * small - l1), a0_min});

    const double amp = big - small;
    if (amp > 1e-14) {
        const double bound_max = 2.0 * amp / std::tan(kPi * (mean - small) / (2.0 * amp));
        const double bound_min = -2.0 * amp / std::tan(kPi * (big - mean) / (2.0 * amp));
        checks.push_back({"cotangent_max", a0_max, bound_max});
        checks.push_back({"cotangent_min", bound_min, a0_min});
    } else {
        checks.push_back({"cotangent_max", a0_max, 0.0});
        checks.push_back({"cotangent_min", 0.0, a0_min});
    }

    // derivative bounds: g = d mu / dtheta, V the amplitude of mu
    const auto g = ws.derivative(mu.values);
    const auto gmax =
        static_cast<std::size_t>(std::max_element(g.begin(), g.end()) - g.begin());
    const double g0 = g[gmax];
    const double a0_g = a0_of_values(g, gmax);
    const auto h_g = ws.hilbert(g);
    checks.push_back({"derivative_square", 4.0 * amp * a0_g, g0 * g0});
    checks.push_back({"derivative_gap", a0_g, std::max(g0 - amp, 0.0)});
    checks.push_back({"hilbert_bound", 32.0 * amp * a0_g, h_g[gmax] * h_g[gmax]});
    return checks;
}

bool BoundReport::all_passed() const {
    for (const auto& b : bounds)
        if (!b.passed) return false;
    return true;
}

namespace {

struct CheckBuilder {
    BoundCheck check;
    bool seen = false;
    explicit CheckBuilder(std::string name) { check.name = std::move(name); }
    void observe(double slack, double t) {
        if (!seen || slack < check.worst_margin) {
            check.worst_margin = slack;
            check.worst_time = t;
            seen = true;
        }
        if (slack < 0.0) check.passed = false;
    }
};

}  // namespace

BoundReport bound_report(const DensityTrajectory& trajectory, const BoundReportOptions& opts) {
    if (trajectory.states.empty())
        throw std::invalid_argument("bound_report: empty trajectory");
    const std::size_t m = trajectory.states.front().grid_size();
    SpectralWorkspace ws(m, 0.0);
    const int n_modes = opts.entropy_modes > 0
                            ? opts.entropy_modes
                            : static_cast<int>(ws.dealias_cutoff());
    const double dtheta = kTwoPi / static_cast<double>(m);
    const std::size_t steps = trajectory.states.size();

    BoundReport report;
    BoundSeries& s = report.series;
    s.t = trajectory.times;
    s.maximum.resize(steps);
    s.minimum.resize(steps);
    s.amplitude.resize(steps);
    s.entropy.resize(steps);
    s.dissipation.resize(steps);
    s.derivative_max.resize(steps);
    s.mass.resize(steps);
    for (int p : opts.lp_orders) s.lp[p].resize(steps);

    std::vector<double> viscous_flux(steps, 0.0);
    for (std::size_t k = 0; k < steps; ++k) {
        const PeriodicDensity& mu = trajectory.states[k];
        s.maximum[k] = mu.maximum();
        s.minimum[k] = mu.minimum();
        s.amplitude[k] = s.maximum[k] - s.minimum[k];
        s.mass[k] = mu.mass();
        const auto spec = ws.forward(mu.values);
        double entropy = 0.0, flux = 0.0;
        for (int n = 1; n <= n_modes; ++n) {
            const auto cn = spec[static_cast<std::size_t>(n)] * dtheta;
            entropy += std::norm(cn) / static_cast<double>(n);
            flux += static_cast<double>(n) * std::norm(cn);
        }
        s.entropy[k] = entropy;
        viscous_flux[k] = 2.0 * opts.viscosity * flux;
        s.dissipation[k] = entropy_dissipation(mu, ws).hilbert_form;
        const auto der = ws.derivative(mu.values);
        double dmax = 0.0;
        for (double d : der) dmax = std::max(dmax, std::abs(d));
        s.derivative_max[k] = dmax;
        for (int p : opts.lp_orders) {
            double acc = 0.0;
            for (double v : mu.values) acc += std::pow(std::abs(v), p);
            s.lp[p][k] = std::pow(acc * dtheta, 1.0 / static_cast<double>(p));
        }
    }

    const double m0 = s.minimum.front();
    const double inv2pi = 1.0 / kTwoPi;

    CheckBuilder mass("mass_conservation");
    CheckBuilder max_mono("max_nonincreasing");
    CheckBuilder min_mono("min_nondecreasing");
    CheckBuilder reg("linfty_regularization");
    CheckBuilder longtime("linfty_longtime");
    CheckBuilder min_low("min_longtime");
    CheckBuilder amp("amplitude_decay");
    CheckBuilder der("derivative_decay");
    CheckBuilder ent("entropy_nonincreasing");
    CheckBuilder diss("entropy_dissipation_identity");
    std::map<int, CheckBuilder> lp_checks;
    for (int p : opts.lp_orders) lp_checks.emplace(p, CheckBuilder("lp_nonincreasing_p" +
                                                                    std::to_string(p)));

    double d_peak = 0.0;
    for (double d : s.dissipation) d_peak = std::max(d_peak, d);
    double anchor_c1 = 0.0;
    bool anchored = false;

    for (std::size_t k = 0; k < steps; ++k) {
        const double t = s.t[k];
        mass.observe(opts.mass_tol - std::abs(s.mass[k] - 1.0), t);
        if (k > 0) {
            max_mono.observe(s.maximum[k - 1] - s.maximum[k] + opts.step_tol, t);
            min_mono.observe(s.minimum[k] - s.minimum[k - 1] + opts.step_tol, t);
            ent.observe(s.entropy[k - 1] - s.entropy[k] + opts.entropy_step_tol, t);
            for (int p : opts.lp_orders)
                lp_checks.at(p).observe(
                    s.lp[p][k - 1] - s.lp[p][k] + opts.lp_step_tol * std::max(1.0, s.lp[p][k - 1]),
                    t);
            const double dt = s.t[k] - s.t[k - 1];
            const double d_mid = 0.5 * (s.dissipation[k] + s.dissipation[k - 1] +
                                        viscous_flux[k] + viscous_flux[k - 1]);
            if (dt > 1e-12 && d_mid > 1e-4 * d_peak && d_peak > 0.0) {
                const double fd = (s.entropy[k] - s.entropy[k - 1]) / dt;
                diss.observe(opts.dissipation_rel_tol - std::abs(fd + d_mid) / d_mid, t);
            }
        }
        if (t >= opts.regularization_t_min) {
            const double env = 0.5 / std::sqrt(1.0 - std::exp(-t));
            reg.observe(env * (1.0 + opts.envelope_rel_tol) - s.maximum[k], t);
        }
        if (t >= opts.longtime_t_min) {
            const double env = inv2pi / (1.0 - std::exp(-2.0 * t / (kPi * kPi)));
            longtime.observe(env * (1.0 + opts.envelope_rel_tol) - s.maximum[k], t);
        }
        if (m0 > 0.0) {
            const double env =
                inv2pi / (1.0 + (1.0 / (kTwoPi * m0) - 1.0) * std::exp(-2.0 * t / (kPi * kPi)));
            min_low.observe(s.minimum[k] - env * (1.0 - opts.envelope_rel_tol), t);
            amp.observe(s.amplitude.front() * std::exp(-4.0 * m0 * t) *
                                (1.0 + opts.envelope_rel_tol) -
                            s.amplitude[k],
                        t);
            if (!anchored && t >= opts.derivative_anchor) {
                anchor_c1 = s.derivative_max[k] * std::exp(m0 * t);
                anchored = true;
            }
            if (anchored)
                der.observe(anchor_c1 * std::exp(-m0 * t) * (1.0 + opts.envelope_rel_tol) -
                                s.derivative_max[k],
                            t);
        }
    }

    report.bounds.push_back(mass.check);
    report.bounds.push_back(max_mono.check);
    report.bounds.push_back(min_mono.check);
    for (auto& [p, cb] : lp_checks) report.bounds.push_back(cb.check);
    report.bounds.push_back(reg.check);
    report.bounds.push_back(longtime.check);
    if (m0 > 0.0) {
        report.bounds.push_back(min_low.check);
        report.bounds.push_back(amp.check);
        report.bounds.push_back(der.check);
    }
    report.bounds.push_back(ent.check);
    report.bounds.push_back(diss.check);
    return report;
}

void write_series_csv(const BoundReport& report, const std::string& csv_path) {
    std::FILE* f = std::fopen(csv_path.c_str(), "wb");
    if (!f) throw std::runtime_error("write_series_csv: cannot open " + csv_path);
    std::fprintf(f, "t,M,m,V,I,D");
    for (const auto& [p, series] : report.series.lp) std::fprintf(f, ",lp_%d", p);
    std::fprintf(f, ",dmax,mass\n");
    for (std::size_t k = 0; k < report.series.t.size(); ++k) {
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", report.series.t[k],
                     report.series.maximum[k], report.series.minimum[k],
                     report.series.amplitude[k], report.series.entropy[k],
                     report.series.dissipation[k]);
        for (const auto& [p, series] : report.series.lp)
            std::fprintf(f, ",%.17g", series[k]);
        std::fprintf(f, ",%.17g,%.17g\n", report.series.derivative_max[k],
                     report.series.mass[k]);
    }
    std::fclose(f);
}

void write_report_json(const BoundReport& report, const std::string& json_path,
                       const std::string& series_csv_name) {
    nlohmann::ordered_json j;
    j["bounds"] = nlohmann::ordered_json::array();
    for (const auto& b : report.bounds) {
        j["bounds"].push_back({{"name", b.name},
                               {"passed", b.passed},
                               {"worst_margin", b.worst_margin},
                               {"worst_time", b.worst_time}});
    }
    j["series_file"] = series_csv_name;
    j["all_passed"] = report.all_passed();
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw std::runtime_error("write_report_json: cannot open " + json_path);
    out << j.dump(2) << "\n";
}

}  // namespace dyson
