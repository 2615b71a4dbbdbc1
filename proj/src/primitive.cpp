#include "dyson/primitive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dyson {

std::vector<double> a0_weights(std::size_t grid_size) {
    const double dtheta = kTwoPi / static_cast<double>(grid_size);
    std::vector<double> w(grid_size, 0.0);  // w[0] unused (second difference vanishes)
    for (std::size_t k = 1; k < grid_size; ++k) {
        const double s = std::sin(0.5 * static_cast<double>(k) * dtheta);
        w[k] = dtheta / (4.0 * s * s);
    }
    return w;
}

namespace {

double a0_at(const PseudoCDF& f, const std::vector<double>& w, std::size_t node) {
    const auto m = static_cast<long long>(f.grid_size());
    const auto j = static_cast<long long>(node);
    double acc = 0.0;
    const double fj = f.values[node];
    for (long long k = 1; k < m; ++k)
        acc += w[static_cast<std::size_t>(k)] * (2.0 * fj - f.node(j - k) - f.node(j + k));
    return acc;
}

}  // namespace

double a0_quadrature(const PseudoCDF& f, std::size_t node) {
    return a0_at(f, a0_weights(f.grid_size()), node);
}

std::vector<double> a0_quadrature_all(const PseudoCDF& f) {
    const auto w = a0_weights(f.grid_size());
    std::vector<double> out(f.grid_size());
    for (std::size_t j = 0; j < f.grid_size(); ++j) out[j] = a0_at(f, w, j);
    return out;
}

std::pair<double, double> a0_split(const PseudoCDF& f, std::size_t node, double delta) {
    const auto m = static_cast<long long>(f.grid_size());
    const double dtheta = kTwoPi / static_cast<double>(m);
    const auto w = a0_weights(f.grid_size());
    const auto j = static_cast<long long>(node);
    double near = 0.0, far = 0.0;
    const double fj = f.values[node];
    for (long long k = 1; k < m; ++k) {
        const double term =
            w[static_cast<std::size_t>(k)] * (2.0 * fj - f.node(j - k) - f.node(j + k));
        // offset of node j+k as a symmetric angle in (-pi, pi]
        const double offset = std::min(static_cast<double>(k), static_cast<double>(m - k)) * dtheta;
        (offset <= delta ? near : far) += term;
    }
    return {near, far};
}

namespace {

struct SchemeTerms {
    std::vector<double> a0, slope_minus, slope_plus;  // (D-F)_+ and (D+F)_+
};

SchemeTerms scheme_terms(const PseudoCDF& f, const std::vector<double>& w) {
    const auto m = static_cast<long long>(f.grid_size());
    const double dtheta = kTwoPi / static_cast<double>(m);
    SchemeTerms terms;
    terms.a0.resize(f.grid_size());
    terms.slope_minus.resize(f.grid_size());
    terms.slope_plus.resize(f.grid_size());
    for (long long j = 0; j < m; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        terms.a0[ju] = a0_at(f, w, ju);
        terms.slope_minus[ju] = std::max(0.0, (f.values[ju] - f.node(j - 1)) / dtheta);
        terms.slope_plus[ju] = std::max(0.0, (f.node(j + 1) - f.values[ju]) / dtheta);
    }
    return terms;
}

double cfl_bound(const SchemeTerms& terms, const std::vector<double>& w, double dtheta) {
    double w_total = 0.0;
    for (double wk : w) w_total += wk;
    double worst = 0.0;
    for (std::size_t j = 0; j < terms.a0.size(); ++j) {
        const double slope = std::max(terms.slope_minus[j], terms.slope_plus[j]);
        worst = std::max(worst, std::abs(terms.a0[j]) / dtheta + 2.0 * w_total * slope);
    }
    return worst > 0.0 ? 1.0 / worst : 1e6;
}

}  // namespace

double primitive_cfl_dt(const PseudoCDF& f) {
    const auto w = a0_weights(f.grid_size());
    const double dtheta = kTwoPi / static_cast<double>(f.grid_size());
    return cfl_bound(scheme_terms(f, w), w, dtheta);
}

PrimitiveState primitive_step(const PrimitiveState& state, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("primitive_step: need dt > 0");
    const PseudoCDF& f = state.grid;
    const auto w = a0_weights(f.grid_size());
    const double dtheta = kTwoPi / static_cast<double>(f.grid_size());
    const SchemeTerms terms = scheme_terms(f, w);
    const double dt_cfl = cfl_bound(terms, w, dtheta);
    if (dt > dt_cfl) {
        std::ostringstream msg;
        msg << "primitive_step: CFL violated (dt " << dt << " > " << dt_cfl
            << "); retry with dt <= " << 0.9 * dt_cfl;
        throw std::invalid_argument(msg.str());
    }

    PrimitiveState next;
    next.grid.winding = f.winding;
    next.grid.values.resize(f.grid_size());
    for (std::size_t j = 0; j < f.grid_size(); ++j) {
        const double a = terms.a0[j];
        // upwind by the sign of the velocity A0
        const double hamiltonian = std::max(a, 0.0) * terms.slope_minus[j] +
                                   std::min(a, 0.0) * terms.slope_plus[j];
        next.grid.values[j] = f.values[j] - dt * hamiltonian;
    }
    next.grid.validate();
    next.time = state.time + dt;
    return next;
}

PrimitiveTrajectory solve_primitive(const PseudoCDF& initial, double total_time,
                                    const PrimitiveSolveOptions& opts) {
    initial.validate();
    PrimitiveTrajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(initial);
    if (total_time <= 0.0) return traj;

    PrimitiveState state{initial, 0.0};
    std::uint64_t step = 0;
    while (state.time < total_time) {
        double dt = std::min(opts.dt_max, opts.safety * primitive_cfl_dt(state.grid));
        dt = std::min(dt, total_time - state.time);
        state = primitive_step(state, dt);
        ++step;
        if (step % opts.record_stride == 0 || state.time >= total_time) {
            traj.times.push_back(state.time);
            traj.states.push_back(state.grid);
        }
    }
    traj.steps_taken = step;
    return traj;
}

}  // namespace dyson
