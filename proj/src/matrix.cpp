#include "dyson/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dyson {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : a_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::frobenius() const {
    double s = 0.0;
    for (const auto& z : a_) s += std::norm(z);
    return std::sqrt(s);
}

Complex ComplexMatrix::determinant() const {
    ComplexMatrix lu = *this;
    const std::size_t n = n_;
    Complex det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(lu(r, k)) > std::abs(lu(pivot, k))) pivot = r;
        if (std::abs(lu(pivot, k)) == 0.0) return 0.0;
        if (pivot != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(lu(pivot, c), lu(k, c));
            det = -det;
        }
        det *= lu(k, k);
        for (std::size_t r = k + 1; r < n; ++r) {
            const Complex f = lu(r, k) / lu(k, k);
            for (std::size_t c = k; c < n; ++c) lu(r, c) -= f * lu(k, c);
        }
    }
    return det;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t n = a.size();
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) m(i, j) += aik * b(k, j);
        }
    return m;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a(i, j) + b(i, j);
    return m;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a(i, j) - b(i, j);
    return m;
}

double hermitian_defect(const ComplexMatrix& a) { return (a - a.adjoint()).max_abs(); }

double unitarity_defect(const ComplexMatrix& u) {
    return (u.adjoint() * u - ComplexMatrix::identity(u.size())).max_abs();
}

ComplexMatrix sample_gue(std::size_t n, const NoiseStream& noise, std::uint32_t step) {
    if (n < 1) throw std::invalid_argument("sample_gue: need N >= 1");
    ComplexMatrix m(n);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = noise.gue_entry(step, static_cast<std::uint32_t>(i * n + i), 0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto flat = static_cast<std::uint32_t>(i * n + j);
            const Complex z(inv_sqrt2 * noise.gue_entry(step, flat, 0),
                            inv_sqrt2 * noise.gue_entry(step, flat, 1));
            m(i, j) = z;
            m(j, i) = std::conj(z);
        }
    }
    return m;
}

Eigensystem hermitian_eig(const ComplexMatrix& h) {
    const std::size_t n = h.size();
    if (n == 0) throw std::invalid_argument("hermitian_eig: empty matrix");
    const double norm = h.frobenius();
    if (hermitian_defect(h) > 1e-12 * std::max(1.0, norm))
        throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");

    ComplexMatrix a = h;
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double target = 1e-13 * norm;

    auto off_mass = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
        return std::sqrt(s);
    };

    int sweep = 0;
    while (n > 1 && off_mass() > target) {
        if (++sweep > 30)
            throw std::runtime_error("hermitian_eig: no convergence after 30 Jacobi sweeps");
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const Complex phase = apq / mag;  // apq = mag * phase
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // T = [[c, s], [-s conj(phase), c conj(phase)]] zeroes a_pq
                const Complex tqp = -s * std::conj(phase);
                const Complex tqq = c * std::conj(phase);
                for (std::size_t r = 0; r < n; ++r) {  // A <- A T, V <- V T
                    const Complex arp = a(r, p), arq = a(r, q);
                    a(r, p) = c * arp + tqp * arq;
                    a(r, q) = s * arp + tqq * arq;
                    const Complex vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = c * vrp + tqp * vrq;
                    v(r, q) = s * vrp + tqq * vrq;
                }
                for (std::size_t col = 0; col < n; ++col) {  // A <- T^+ A
                    const Complex apc = a(p, col), aqc = a(q, col);
                    a(p, col) = c * apc + std::conj(tqp) * aqc;
                    a(q, col) = s * apc + std::conj(tqq) * aqc;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    Eigensystem sys;
    sys.values.resize(n);
    sys.vectors = ComplexMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        sys.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) sys.vectors(r, k) = v(r, order[k]);
    }
    return sys;
}

ComplexMatrix reorthonormalize(ComplexMatrix u, double tol) {
    for (int it = 0; it < 12; ++it) {
        if (unitarity_defect(u) <= tol) return u;
        const std::size_t n = u.size();
        ComplexMatrix g = u.adjoint() * u;
        ComplexMatrix corr(n);  // (3I - U^+U)/2
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                corr(i, j) = (i == j ? Complex(1.5, 0.0) : Complex{}) - 0.5 * g(i, j);
        u = u * corr;
    }
    if (unitarity_defect(u) > tol)
        throw std::runtime_error("reorthonormalize: polar iteration did not converge");
    return u;
}

ComplexMatrix unitary_step(const ComplexMatrix& u, double h, const ComplexMatrix& gue) {
    if (!(h > 0.0)) throw std::invalid_argument("unitary_step: need h > 0");
    const std::size_t n = u.size();
    // sqrt(2h/N) calibrates the increment so the eigenphases move with drift
    // (1/N) sum cot((d)/2) and noise sqrt(2/N) per unit time, matching the
    // particle channel at equal times
    const double s = std::sqrt(2.0 * h / static_cast<double>(n));
    const Eigensystem eig = hermitian_eig(gue);
    // exp(i s M) = V diag(e^{i s lambda}) V^+
    ComplexMatrix scaled = eig.vectors;
    for (std::size_t k = 0; k < n; ++k) {
        const Complex factor = std::polar(1.0, s * eig.values[k]);
        for (std::size_t r = 0; r < n; ++r) scaled(r, k) *= factor;
    }
    ComplexMatrix result = u * (scaled * eig.vectors.adjoint());
    if (unitarity_defect(result) > 1e-10) result = reorthonormalize(std::move(result), 1e-12);
    return result;
}

std::vector<Angle> eigenphases(const ComplexMatrix& u) {
    const std::size_t n = u.size();
    if (unitarity_defect(u) > 1e-8)
        throw std::invalid_argument("eigenphases: input is not unitary within tolerance");

    const ComplexMatrix ud = u.adjoint();
    ComplexMatrix c_part(n), s_part(n);  // C = (U+U^+)/2, S = (U-U^+)/(2i)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            c_part(i, j) = 0.5 * (u(i, j) + ud(i, j));
            s_part(i, j) = Complex(0.0, -0.5) * (u(i, j) - ud(i, j));
        }

    Eigensystem ce = hermitian_eig(c_part);
    ComplexMatrix basis = ce.vectors;

    // Resolve theta vs -theta inside each eigenvalue cluster of C by
    // diagonalizing the restriction of S there.
    std::vector<double> sines(n, 0.0);
    constexpr double cluster_gap = 1e-8;
    std::size_t start = 0;
    while (start < n) {
        std::size_t stop = start + 1;
        while (stop < n && ce.values[stop] - ce.values[stop - 1] <= cluster_gap) ++stop;
        const std::size_t q = stop - start;
        if (q == 1) {
            Complex rayleigh{};
            for (std::size_t r = 0; r < n; ++r) {
                Complex sv{};
                for (std::size_t m = 0; m < n; ++m) sv += s_part(r, m) * basis(m, start);
                rayleigh += std::conj(basis(r, start)) * sv;
            }
            sines[start] = rayleigh.real();
        } else {
            ComplexMatrix restricted(q);  // V_Q^+ S V_Q, Hermitian up to roundoff
            std::vector<std::vector<Complex>> sv(q, std::vector<Complex>(n));
            for (std::size_t k = 0; k < q; ++k)
                for (std::size_t r = 0; r < n; ++r) {
                    Complex acc{};
                    for (std::size_t m = 0; m < n; ++m)
                        acc += s_part(r, m) * basis(m, start + k);
                    sv[k][r] = acc;
                }
            for (std::size_t k = 0; k < q; ++k)
                for (std::size_t l = 0; l < q; ++l) {
                    Complex acc{};
                    for (std::size_t r = 0; r < n; ++r)
                        acc += std::conj(basis(r, start + k)) * sv[l][r];
                    restricted(k, l) = acc;
                }
            for (std::size_t k = 0; k < q; ++k)
                for (std::size_t l = k + 1; l < q; ++l) {
                    const Complex sym = 0.5 * (restricted(k, l) + std::conj(restricted(l, k)));
                    restricted(k, l) = sym;
                    restricted(l, k) = std::conj(sym);
                }
            const Eigensystem se = hermitian_eig(restricted);
            // rotate the cluster columns of the basis by the eigenvectors of S
            std::vector<std::vector<Complex>> rotated(q, std::vector<Complex>(n));
            for (std::size_t k = 0; k < q; ++k)
                for (std::size_t r = 0; r < n; ++r) {
                    Complex acc{};
                    for (std::size_t l = 0; l < q; ++l)
                        acc += basis(r, start + l) * se.vectors(l, k);
                    rotated[k][r] = acc;
                }
            for (std::size_t k = 0; k < q; ++k) {
                sines[start + k] = se.values[k];
                for (std::size_t r = 0; r < n; ++r) basis(r, start + k) = rotated[k][r];
            }
        }
        start = stop;
    }

    // Per-column cosines from the Rayleigh quotient of C, then the residual
    // ||U w - e^{i theta} w|| certifies the joint diagonalization.
    std::vector<Angle> phases(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex cq{};
        for (std::size_t r = 0; r < n; ++r) {
            Complex cv{};
            for (std::size_t m = 0; m < n; ++m) cv += c_part(r, m) * basis(m, k);
            cq += std::conj(basis(r, k)) * cv;
        }
        const double theta = std::atan2(sines[k], cq.real());
        double residual = 0.0;
        const Complex phase = std::polar(1.0, theta);
        for (std::size_t r = 0; r < n; ++r) {
            Complex uv{};
            for (std::size_t m = 0; m < n; ++m) uv += u(r, m) * basis(m, k);
            residual += std::norm(uv - phase * basis(r, k));
        }
        if (std::sqrt(residual) > 1e-6) {
            std::ostringstream msg;
            msg << "eigenphases: cluster resolution failed, residual " << std::sqrt(residual);
            throw std::runtime_error(msg.str());
        }
        phases[k] = wrap_angle(theta);
    }
    std::sort(phases.begin(), phases.end(),
              [](const Angle& a, const Angle& b) { return a.radians < b.radians; });
    return phases;
}

PhaseTrajectory simulate_matrix(std::size_t n, double total_time, double h,
                                std::uint64_t seed, std::size_t record_every,
                                const ComplexMatrix* initial) {
    if (n < 2) throw std::invalid_argument("simulate_matrix: need N >= 2");
    if (!(h > 0.0)) throw std::invalid_argument("simulate_matrix: need h > 0");
    if (record_every == 0) record_every = 1;

    ComplexMatrix u = initial ? *initial : ComplexMatrix(n);
    if (!initial)
        for (std::size_t j = 0; j < n; ++j)
            u(j, j) = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(n));
    if (unitarity_defect(u) > 1e-8)
        throw std::invalid_argument("simulate_matrix: initial matrix is not unitary");

    PhaseTrajectory traj;
    traj.dimension = n;
    traj.seed = seed;
    auto record = [&](double t) {
        const auto ph = eigenphases(u);
        std::vector<double> row(n);
        for (std::size_t k = 0; k < n; ++k) row[k] = ph[k].radians;
        traj.times.push_back(t);
        traj.phases.push_back(std::move(row));
    };
    record(0.0);
    if (total_time <= 0.0) return traj;

    const auto n_steps = static_cast<std::size_t>(std::llround(std::ceil(total_time / h - 1e-9)));
    const double dt = total_time / static_cast<double>(n_steps);
    NoiseStream noise(seed);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const ComplexMatrix m = sample_gue(n, noise, static_cast<std::uint32_t>(k));
        u = unitary_step(u, dt, m);
        if ((k + 1) % record_every == 0 || k + 1 == n_steps)
            record(dt * static_cast<double>(k + 1));
    }
    return traj;
}

}  // namespace dyson
