#include "dyson/sde.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dyson {

SDEParameters SDEParameters::dyson(std::size_t n) {
    // alpha = N gives the drift (1/N) sum cot((x_i-x_j)/2) of the Dyson flux;
    // beta = N^2 gives noise sqrt(2/N), which is what the eigenphases of the
    // unitary matrix channel actually carry (second-order perturbation of
    // U exp(i eps M) with E|M_ij|^2 = 1: drift (eps^2/2) sum cot, variance
    // eps^2 per step). This makes the two channels one diffusion, with the
    // beta = 2 circular-ensemble stationary law.
    SDEParameters p;
    p.count = n;
    p.alpha = static_cast<double>(n);
    p.beta = static_cast<double>(n) * static_cast<double>(n);
    p.noise_scale = std::sqrt(2.0 / static_cast<double>(n));
    return p;
}

SDEParameters SDEParameters::general(std::size_t n, double alpha, double beta) {
    if (alpha < 0.0 || beta <= 0.0)
        throw std::invalid_argument("SDEParameters: need alpha >= 0 and beta > 0");
    SDEParameters p;
    p.count = n;
    p.alpha = alpha;
    p.beta = beta;
    p.noise_scale = std::sqrt(2.0 * alpha / beta);
    return p;
}

double cot_half(double x) { return 1.0 / std::tan(0.5 * x); }

namespace {

void require_resolved(const LiftedConfiguration& config, double tol, const char* who) {
    if (config.count() >= 2 && config.min_gap() < tol) {
        std::ostringstream msg;
        msg << who << ": near-collision, min gap " << config.min_gap();
        throw std::runtime_error(msg.str());
    }
}

}  // namespace

namespace {

// Half-angle tables make the O(N^2) kernel cheap: with a_i = x_i/2,
//   cotan((x_i - x_j)/2) = (cos a_i cos a_j + sin a_i sin a_j)
//                          / (sin a_i cos a_j - cos a_i sin a_j),
// so one sin/cos pair per particle replaces one tan per pair.
struct HalfAngles {
    std::vector<double> s, c;
    explicit HalfAngles(const std::vector<double>& x) : s(x.size()), c(x.size()) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            s[i] = std::sin(0.5 * x[i]);
            c[i] = std::cos(0.5 * x[i]);
        }
    }
    double cot_pair(std::size_t i, std::size_t j) const {
        return (c[i] * c[j] + s[i] * s[j]) / (s[i] * c[j] - c[i] * s[j]);
    }
};

}  // namespace

std::vector<double> pairwise_drift(const LiftedConfiguration& config,
                                   const SDEParameters& params) {
    const std::size_t n = config.count();
    if (n < 2) throw std::invalid_argument("pairwise_drift: need N >= 2");
    require_resolved(config, params.collision_tol, "pairwise_drift");
    const HalfAngles half(config.positions());
    std::vector<double> drift(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = half.cot_pair(i, j);
            drift[i] += c;
            drift[j] -= c;
        }
    }
    const double scale = params.alpha / (static_cast<double>(n) * static_cast<double>(n));
    for (double& d : drift) d *= scale;
    return drift;
}

std::vector<double> pack_drift(const LiftedConfiguration& config,
                               const SDEParameters& params, long long pack) {
    const std::size_t n = config.count();
    if (n < 2) throw std::invalid_argument("pack_drift: need N >= 2");
    require_resolved(config, params.collision_tol, "pack_drift");
    // extended position x + 2pi q has half angle x/2 + pi q: the table entries
    // flip sign with the parity of q, and the flips cancel in the ratio, which
    // realizes the 2pi-periodicity of cotan(./2) exactly
    const HalfAngles half(config.positions());
    const long long lo = pack * static_cast<long long>(n);
    const long long nn = static_cast<long long>(n);
    auto split = [nn](long long idx) {
        long long q = idx / nn, r = idx % nn;
        if (r < 0) { r += nn; --q; }
        return std::pair<long long, long long>(q, r);
    };
    std::vector<double> drift(n, 0.0);
    const double scale = params.alpha / (static_cast<double>(n) * static_cast<double>(n));
    for (long long i = lo; i < lo + nn; ++i) {
        const auto [qi, ri] = split(i);
        const double sign_i = (qi % 2 == 0) ? 1.0 : -1.0;
        const double si = sign_i * half.s[static_cast<std::size_t>(ri)];
        const double ci = sign_i * half.c[static_cast<std::size_t>(ri)];
        double acc = 0.0;
        for (long long k = lo; k < lo + nn; ++k) {
            if (k == i) continue;
            const auto [qk, rk] = split(k);
            const double sign_k = (qk % 2 == 0) ? 1.0 : -1.0;
            const double sk = sign_k * half.s[static_cast<std::size_t>(rk)];
            const double ck = sign_k * half.c[static_cast<std::size_t>(rk)];
            acc += (ci * ck + si * sk) / (si * ck - ci * sk);
        }
        drift[static_cast<std::size_t>(i - lo)] = acc * scale;
    }
    return drift;
}

EnergyBreakdown energy(const LiftedConfiguration& config) {
    const std::size_t n = config.count();
    require_resolved(config, 1e-15, "energy");
    const auto& x = config.positions();
    EnergyBreakdown e;
    for (double xi : x) e.confinement += xi * xi;
    e.confinement /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = std::sin(0.5 * (x[i] - x[j]));
            e.interaction += -2.0 * std::log(std::abs(s));
        }
    e.interaction *= 2.0 / (static_cast<double>(n) * static_cast<double>(n));
    e.total = e.confinement + e.interaction;
    return e;
}

double generator_constant(const SDEParameters& params) {
    const double n = static_cast<double>(params.count);
    return 2.0 * params.alpha / (n * n * n * n) *
           (n * (n - 1.0) * (n - 2.0) / 3.0 + n * (n - 1.0));
}

double generator_bound(const SDEParameters& params) {
    const double n = static_cast<double>(params.count);
    return 2.0 * params.alpha / params.beta + 2.0 * params.alpha * (n - 1.0) / (n * n) +
           generator_constant(params);
}

GeneratorBreakdown generator_energy(const LiftedConfiguration& config,
                                    const SDEParameters& params) {
    const std::size_t n = config.count();
    if (n < 2) throw std::invalid_argument("generator_energy: need N >= 2");
    require_resolved(config, params.collision_tol, "generator_energy");
    const auto& x = config.positions();
    const double nd = static_cast<double>(n);

    double psi_sum = 0.0;      // sum_{i != j} (d/2) cotan(d/2), d = x_i - x_j
    double inv_sin2_sum = 0.0; // sum_{i != j} 1/sin^2(d/2)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = x[i] - x[j];
            psi_sum += 2.0 * (0.5 * d) * cot_half(d);  // psi is even in d
            const double s = std::sin(0.5 * d);
            inv_sin2_sum += 2.0 / (s * s);
        }

    GeneratorBreakdown g;
    g.confinement = 2.0 * params.alpha / params.beta +
                    2.0 * params.alpha / (nd * nd * nd) * psi_sum;
    const double bracket =
        params.alpha / (nd * nd * params.beta) - 2.0 * params.alpha / (nd * nd * nd * nd);
    g.interaction = bracket * inv_sin2_sum + generator_constant(params);
    g.total = g.confinement + g.interaction;
    return g;
}

double triple_cotangent_sum(const LiftedConfiguration& config) {
    const std::size_t n = config.count();
    if (n < 3) throw std::invalid_argument("triple_cotangent_sum: need N >= 3");
    const auto& x = config.positions();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double cij = cot_half(x[i] - x[j]);
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                s += cot_half(x[i] - x[k]) * cij;
            }
        }
    return s;
}

namespace {

bool strictly_ordered_on_circle(const std::vector<double>& p) {
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (!(p[i] < p[i + 1])) return false;
    return p.size() < 2 || p.back() < p.front() + kTwoPi;
}

struct BridgeStepper {
    const SDEParameters& params;
    const NoiseStream& noise;
    std::uint32_t step_index;
    bool enforce_pair_order;  // systems[0] <= systems[1] coordinatewise
    StepStats* stats;
    static constexpr int kMaxDepth = 40;

    // Advance all systems over an interval of length h carrying the shared
    // per-particle Brownian increments `w` (scaled, variance h each). `depth`
    // and `offset` locate the interval in the dyadic refinement of the
    // original step; the midpoint normal of interval (depth, offset) is
    // addressed by the heap code 2^depth + offset.
    void advance(std::vector<LiftedConfiguration>& systems, double h,
                 const std::vector<double>& w, int depth, std::uint64_t offset) const {
        const std::size_t n = systems.front().count();
        std::vector<std::vector<double>> proposals;
        proposals.reserve(systems.size());
        bool ok = true;
        for (const auto& sys : systems) {
            const auto drift = pairwise_drift(sys, params);
            std::vector<double> p(n);
            for (std::size_t i = 0; i < n; ++i)
                p[i] = sys.positions()[i] + h * drift[i] + params.noise_scale * w[i];
            if (!strictly_ordered_on_circle(p)) ok = false;
            proposals.push_back(std::move(p));
        }
        if (ok && enforce_pair_order) {
            for (std::size_t i = 0; i < n && ok; ++i)
                if (proposals[0][i] > proposals[1][i]) ok = false;
        }
        if (ok) {
            for (std::size_t s = 0; s < systems.size(); ++s) {
                const double ref = proposals[s].front();
                systems[s] = LiftedConfiguration(std::move(proposals[s]), ref);
            }
            return;
        }
        if (depth >= kMaxDepth) {
            double gap = kTwoPi;
            for (const auto& sys : systems) gap = std::min(gap, sys.min_gap());
            std::ostringstream msg;
            msg << "em_step: 40 bridge halvings exhausted (stiff step, min gap " << gap
                << ", dt " << h << ")";
            throw std::runtime_error(msg.str());
        }
        if (stats) ++stats->rejected_steps;
        const std::uint64_t code = (std::uint64_t{1} << depth) + offset;
        std::vector<double> w_left(n), w_right(n);
        const double half_sigma = 0.5 * std::sqrt(h);
        for (std::size_t i = 0; i < n; ++i) {
            const double mid = 0.5 * w[i] +
                               half_sigma * noise.brownian(static_cast<std::uint32_t>(i),
                                                           step_index, code);
            w_left[i] = mid;
            w_right[i] = w[i] - mid;
        }
        advance(systems, 0.5 * h, w_left, depth + 1, 2 * offset);
        advance(systems, 0.5 * h, w_right, depth + 1, 2 * offset + 1);
    }

    void step(std::vector<LiftedConfiguration>& systems, double dt) const {
        const std::size_t n = systems.front().count();
        std::vector<double> w(n);
        const double sigma = std::sqrt(dt);
        for (std::size_t i = 0; i < n; ++i)
            w[i] = sigma * noise.brownian(static_cast<std::uint32_t>(i), step_index);
        advance(systems, dt, w, 0, 0);
    }
};

}  // namespace

LiftedConfiguration em_step(const LiftedConfiguration& config, const SDEParameters& params,
                            double dt, const NoiseStream& noise, std::uint32_t step_index,
                            StepStats* stats) {
    if (!(dt > 0.0)) throw std::invalid_argument("em_step: need dt > 0");
    std::vector<LiftedConfiguration> systems{config};
    BridgeStepper stepper{params, noise, step_index, false, stats};
    stepper.step(systems, dt);
    return systems.front();
}

ParticleTrajectory simulate(const LiftedConfiguration& initial, const SDEParameters& params,
                            double total_time, double dt, std::uint64_t seed,
                            std::size_t record_every) {
    if (initial.count() != params.count)
        throw std::invalid_argument("simulate: configuration size disagrees with parameters");
    if (record_every == 0) record_every = 1;
    ParticleTrajectory traj;
    traj.parameters = params;
    traj.seed = seed;
    traj.well_posedness_warning = !params.well_posed();
    traj.times.push_back(0.0);
    traj.states.push_back(initial);
    if (total_time <= 0.0) return traj;

    const auto n_steps = static_cast<std::size_t>(std::llround(std::ceil(total_time / dt - 1e-9)));
    const double h = total_time / static_cast<double>(n_steps);
    NoiseStream noise(seed);
    StepStats stats;
    LiftedConfiguration state = initial;
    for (std::size_t k = 0; k < n_steps; ++k) {
        state = em_step(state, params, h, noise, static_cast<std::uint32_t>(k), &stats);
        if ((k + 1) % record_every == 0 || k + 1 == n_steps) {
            traj.times.push_back(h * static_cast<double>(k + 1));
            traj.states.push_back(state);
        }
    }
    traj.rejected_steps = stats.rejected_steps;
    return traj;
}

std::pair<ParticleTrajectory, ParticleTrajectory>
coupled_simulate(const LiftedConfiguration& lower, const LiftedConfiguration& upper,
                 const SDEParameters& params, double total_time, double dt,
                 std::uint64_t seed, std::size_t record_every) {
    if (lower.count() != upper.count() || lower.count() != params.count)
        throw std::invalid_argument("coupled_simulate: size mismatch");
    for (std::size_t i = 0; i < lower.count(); ++i)
        if (lower.positions()[i] > upper.positions()[i])
            throw std::invalid_argument("coupled_simulate: initial ordering violated");
    if (record_every == 0) record_every = 1;

    ParticleTrajectory lo, hi;
    lo.parameters = hi.parameters = params;
    lo.seed = hi.seed = seed;
    lo.well_posedness_warning = hi.well_posedness_warning = !params.well_posed();
    lo.times.push_back(0.0);
    hi.times.push_back(0.0);
    lo.states.push_back(lower);
    hi.states.push_back(upper);
    if (total_time <= 0.0) return {lo, hi};

    const auto n_steps = static_cast<std::size_t>(std::llround(std::ceil(total_time / dt - 1e-9)));
    const double h = total_time / static_cast<double>(n_steps);
    NoiseStream noise(seed);
    StepStats stats;
    std::vector<LiftedConfiguration> systems{lower, upper};
    for (std::size_t k = 0; k < n_steps; ++k) {
        BridgeStepper stepper{params, noise, static_cast<std::uint32_t>(k), true, &stats};
        stepper.step(systems, h);
        if ((k + 1) % record_every == 0 || k + 1 == n_steps) {
            const double t = h * static_cast<double>(k + 1);
            lo.times.push_back(t);
            hi.times.push_back(t);
            lo.states.push_back(systems[0]);
            hi.states.push_back(systems[1]);
        }
    }
    lo.rejected_steps = hi.rejected_steps = stats.rejected_steps;
    return {lo, hi};
}

}  // namespace dyson
