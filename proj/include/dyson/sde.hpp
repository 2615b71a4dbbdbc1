// sde.hpp
// The N-particle engine for the eigenphase dynamics on the circle:
//   dx_i = (alpha/N^2) sum_{j != i} cotan((x_i - x_j)/2) dt + sqrt(2 alpha/beta) dB_i.
// Euler-Maruyama with ordering rejection; a rejected step is re-run on the two
// halves of the same Brownian path (bridge refinement), so coupled systems
// stay on identical noise. Energy and generator formulas double as the
// containment diagnostics.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dyson/circle.hpp"
#include "dyson/noise.hpp"

namespace dyson {

struct SDEParameters {
    std::size_t count = 0;       // N
    double alpha = 0.0;          // interaction strength alpha_N >= 0
    double beta = 1.0;           // beta_N > 0
    double noise_scale = 0.0;    // sqrt(2 alpha / beta); set to 0 for drift-only runs
    double collision_tol = 1e-12;

    // alpha = N, beta = N^2, noise sqrt(2/N): the eigenphase diffusion of the
    // unitary matrix channel (beta = 2 circular ensemble)
    static SDEParameters dyson(std::size_t n);
    static SDEParameters general(std::size_t n, double alpha, double beta);

    // beta >= N^2/2 rules out explosion
    bool well_posed() const { return beta >= 0.5 * static_cast<double>(count) * static_cast<double>(count); }
};

// cotan(x/2); the interaction kernel, 2pi-periodic and odd.
double cot_half(double x);

// Drift vector (alpha/N^2) sum_{j != i} cotan((x_i - x_j)/2); components sum
// to zero by antisymmetry. Throws on gaps below collision_tol.
std::vector<double> pairwise_drift(const LiftedConfiguration& config,
                                   const SDEParameters& params);

// Same drift evaluated from the pack {pack*N, ..., (pack+1)*N - 1} of the
// periodic extension; agrees with pairwise_drift by 2pi-periodicity.
std::vector<double> pack_drift(const LiftedConfiguration& config,
                               const SDEParameters& params, long long pack);

struct EnergyBreakdown {
    double confinement = 0.0;  // (1/N) sum x_i^2
    double interaction = 0.0;  // (1/N^2) sum_{i != j} -ln(sin^2((x_i-x_j)/2)), >= 0
    double total = 0.0;
};
EnergyBreakdown energy(const LiftedConfiguration& config);

struct GeneratorBreakdown {
    double confinement = 0.0;  // L E_V
    double interaction = 0.0;  // L E_W
    double total = 0.0;        // L E
};
GeneratorBreakdown generator_energy(const LiftedConfiguration& config,
                                    const SDEParameters& params);

// C_N = (2 alpha / N^4) (N(N-1)(N-2)/3 + N(N-1))
double generator_constant(const SDEParameters& params);

// Uniform bound K_N = 2 alpha/beta + 2 alpha (N-1)/N^2 + C_N, valid on the
// whole ordered cell when beta >= N^2/2.
double generator_bound(const SDEParameters& params);

// S_N = sum_{j!=i, k!=i, j!=k} cotan((x_i-x_k)/2) cotan((x_i-x_j)/2);
// equals -N(N-1)(N-2)/3 identically. O(N^3), diagnostic only.
double triple_cotangent_sum(const LiftedConfiguration& config);

struct StepStats {
    std::uint64_t rejected_steps = 0;
};

// One Euler-Maruyama step over [t, t+dt) driven by the counter-based stream.
// Proposals that break the strict ordering of the periodic extension
// (including the wrap pair) are bisected on the same Brownian bridge; more
// than 40 consecutive halvings is a stiffness error.
LiftedConfiguration em_step(const LiftedConfiguration& config, const SDEParameters& params,
                            double dt, const NoiseStream& noise, std::uint32_t step_index,
                            StepStats* stats = nullptr);

struct ParticleTrajectory {
    SDEParameters parameters;
    std::uint64_t seed = 0;
    std::vector<double> times;
    std::vector<LiftedConfiguration> states;
    std::uint64_t rejected_steps = 0;
    bool well_posedness_warning = false;
};

// March n = round(T/dt) uniform steps of size T/n, recording every
// record_every-th state (plus the initial and final ones).
ParticleTrajectory simulate(const LiftedConfiguration& initial, const SDEParameters& params,
                            double total_time, double dt, std::uint64_t seed,
                            std::size_t record_every = 1);

// Two systems on the same Brownian motions (index i uses stream i mod N in
// both); rejection halvings are synchronized, and a violation of the
// coordinatewise order lower <= upper also forces a refinement, so the
// discrete comparison principle holds exactly along the trajectory.
std::pair<ParticleTrajectory, ParticleTrajectory>
coupled_simulate(const LiftedConfiguration& lower, const LiftedConfiguration& upper,
                 const SDEParameters& params, double total_time, double dt,
                 std::uint64_t seed, std::size_t record_every = 1);

}  // namespace dyson
