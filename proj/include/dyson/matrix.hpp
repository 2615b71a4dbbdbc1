// matrix.hpp
// Direct simulation of the unitary Dyson Brownian motion
//   D(t + h) = D(t) exp(i sqrt(2h/N) M),  M ~ GUE_N (resampled each step),
// with eigenphase extraction. The sqrt(2h/N) scale makes the eigenphases
// follow the same diffusion as the particle channel at equal times. Dense
// complex matrices and a cyclic complex Jacobi eigensolver are enough at
// desk scale (N <= 64); no general nonsymmetric machinery is built.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "dyson/circle.hpp"
#include "dyson/noise.hpp"

namespace dyson {

using Complex = std::complex<double>;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t n) : n_(n), a_(n * n) {}

    static ComplexMatrix identity(std::size_t n);

    std::size_t size() const { return n_; }
    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    ComplexMatrix adjoint() const;
    double max_abs() const;
    double frobenius() const;
    Complex determinant() const;  // LU with partial pivoting

private:
    std::size_t n_ = 0;
    std::vector<Complex> a_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);

double hermitian_defect(const ComplexMatrix& a);   // ||A - A^+||_max
double unitarity_defect(const ComplexMatrix& u);   // ||U^+ U - I||_max

// GUE_N sample: E|M_ij|^2 = 1 off the diagonal (real and imaginary parts of
// variance 1/2 each), real N(0,1) on the diagonal, lower triangle by
// conjugate symmetry. Entries are addressed by (step, i, j), so the sample
// is a pure function of (seed, step).
ComplexMatrix sample_gue(std::size_t n, const NoiseStream& noise, std::uint32_t step);

struct Eigensystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // unitary, columns paired with values
};

// Cyclic complex Jacobi until the off-diagonal Frobenius mass falls below
// 1e-13 * ||H||_F; more than 30 sweeps is a numerical error.
Eigensystem hermitian_eig(const ComplexMatrix& h);

// Newton polar iteration U <- U (3I - U^+U)/2 until the unitarity defect is
// at most the requested tolerance.
ComplexMatrix reorthonormalize(ComplexMatrix u, double tol = 1e-12);

// U exp(i sqrt(2h/N) M), exp evaluated through hermitian_eig of M; the result
// is re-orthonormalized when the defect exceeds 1e-10.
ComplexMatrix unitary_step(const ComplexMatrix& u, double h, const ComplexMatrix& gue);

// Eigenphases of a unitary matrix, sorted in [0, 2pi). Diagonalizes
// C = (U+U^+)/2 and resolves the theta vs -theta ambiguity by jointly
// diagonalizing S = (U-U^+)/(2i) on each eigenvalue cluster of C.
std::vector<Angle> eigenphases(const ComplexMatrix& u);

struct PhaseTrajectory {
    std::size_t dimension = 0;
    std::uint64_t seed = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> phases;  // sorted, in [0, 2pi)
};

// Iterate unitary_step from `initial` (default: diag of equally spaced
// phases 2pi j/N) and record the sorted eigenphases.
PhaseTrajectory simulate_matrix(std::size_t n, double total_time, double h,
                                std::uint64_t seed, std::size_t record_every = 1,
                                const ComplexMatrix* initial = nullptr);

}  // namespace dyson
