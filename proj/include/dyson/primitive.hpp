// primitive.hpp
// Monotone finite-difference scheme for the primitive equation
//   dF/dt + (dF/dtheta)_+ A0[F] = 0
// on the winding grid. A0 is discretized by the positive-weight second
// difference sum with weights dtheta / (4 sin^2(k dtheta / 2)); the slope is
// upwinded by the sign of A0. Every updated value is nondecreasing in every
// neighbouring value under the stated CFL bound, which is what propagates
// monotonicity, winding and the discrete comparison principle exactly.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dyson/circle.hpp"

namespace dyson {

struct PrimitiveState {
    PseudoCDF grid;
    double time = 0.0;
};

// Quadrature weights dtheta / (4 sin^2(k dtheta/2)), k = 1..M-1.
std::vector<double> a0_weights(std::size_t grid_size);

// A0[F] at one node: sum_k w_k (2 F_j - F_{j-k} - F_{j+k}) with the winding
// extension across the period boundary.
double a0_quadrature(const PseudoCDF& f, std::size_t node);
std::vector<double> a0_quadrature_all(const PseudoCDF& f);

// Proof-device split of the same sum at radius delta: (I_{1,delta} over
// |theta'| <= delta, I_{2,delta} over the rest). Diagnostic only; the scheme
// uses the single uniform quadrature.
std::pair<double, double> a0_split(const PseudoCDF& f, std::size_t node, double delta);

// Largest dt for which the update is monotone in every neighbouring value:
// dt * max_j (|A0_j| / dtheta + 2 sum_k w_k * max((D-F_j)_+, (D+F_j)_+)) <= 1.
double primitive_cfl_dt(const PseudoCDF& f);

// One forward Euler step; throws (with a suggested dt) if dt violates the
// CFL bound.
PrimitiveState primitive_step(const PrimitiveState& state, double dt);

struct PrimitiveTrajectory {
    std::vector<double> times;
    std::vector<PseudoCDF> states;
    std::uint64_t steps_taken = 0;
};

struct PrimitiveSolveOptions {
    double safety = 0.9;          // fraction of the CFL bound
    double dt_max = 5e-3;
    std::size_t record_stride = 1;
};

PrimitiveTrajectory solve_primitive(const PseudoCDF& initial, double total_time,
                                    const PrimitiveSolveOptions& opts = {});

}  // namespace dyson
