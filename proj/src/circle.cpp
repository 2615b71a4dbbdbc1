#include "dyson/circle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dyson {

Angle wrap_angle(double x) {
    if (!std::isfinite(x))
        throw std::domain_error("wrap_angle: non-finite input");
    double r = x - kTwoPi * std::floor(x / kTwoPi);
    // floor rounding can land exactly on 2pi for inputs just below a multiple
    if (r >= kTwoPi) r -= kTwoPi;
    if (r < 0.0) r += kTwoPi;
    return Angle{r};
}

double wrap_into_window(double x, double reference) {
    return reference + wrap_angle(x - reference).radians;
}

LiftedConfiguration::LiftedConfiguration(std::vector<double> positions, double reference)
    : positions_(std::move(positions)), reference_(reference) {
    if (positions_.empty())
        throw std::invalid_argument("LiftedConfiguration: empty configuration");
    if (!std::isfinite(reference_))
        throw std::domain_error("LiftedConfiguration: non-finite reference");
    if (positions_.front() < reference_ || positions_.back() >= reference_ + kTwoPi)
        throw std::invalid_argument("LiftedConfiguration: positions leave the lift window");
    for (std::size_t i = 0; i + 1 < positions_.size(); ++i)
        if (!(positions_[i] < positions_[i + 1]))
            throw std::invalid_argument("LiftedConfiguration: ordering violated (collision)");
}

double LiftedConfiguration::position(long long i) const {
    const long long n = static_cast<long long>(positions_.size());
    long long q = i / n, r = i % n;
    if (r < 0) { r += n; --q; }
    return positions_[static_cast<std::size_t>(r)] + kTwoPi * static_cast<double>(q);
}

double LiftedConfiguration::min_gap() const {
    const std::size_t n = positions_.size();
    if (n == 1) return kTwoPi;
    double g = positions_.front() + kTwoPi - positions_.back();
    for (std::size_t i = 0; i + 1 < n; ++i)
        g = std::min(g, positions_[i + 1] - positions_[i]);
    return g;
}

LiftedConfiguration LiftedConfiguration::relift(double new_reference) const {
    std::vector<double> mapped(positions_.size());
    for (std::size_t i = 0; i < positions_.size(); ++i)
        mapped[i] = wrap_into_window(positions_[i], new_reference);
    std::sort(mapped.begin(), mapped.end());
    return LiftedConfiguration(std::move(mapped), new_reference);
}

LiftedConfiguration LiftedConfiguration::shifted(double c) const {
    std::vector<double> moved(positions_.size());
    for (std::size_t i = 0; i < positions_.size(); ++i) moved[i] = positions_[i] + c;
    return LiftedConfiguration(std::move(moved), reference_ + c);
}

LiftedConfiguration lift_configuration(std::span<const double> angles, double reference) {
    std::vector<double> mapped(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i)
        mapped[i] = wrap_into_window(angles[i], reference);
    std::sort(mapped.begin(), mapped.end());
    for (std::size_t i = 0; i + 1 < mapped.size(); ++i)
        if (mapped[i] == mapped[i + 1])
            throw std::invalid_argument("lift_configuration: duplicate angles modulo 2pi");
    return LiftedConfiguration(std::move(mapped), reference);
}

LiftedConfiguration lift_configuration(std::span<const Angle> angles, double reference) {
    std::vector<double> raw(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i) raw[i] = angles[i].radians;
    return lift_configuration(std::span<const double>(raw), reference);
}

double empirical_cdf(const LiftedConfiguration& config, double theta) {
    const double k = std::floor(theta / kTwoPi);
    const double theta0 = theta - kTwoPi * k;
    std::size_t hits = 0;
    for (double p : config.positions())
        if (wrap_angle(p).radians <= theta0) ++hits;
    return static_cast<double>(hits) / static_cast<double>(config.count()) + k;
}

double PseudoCDF::node(long long j) const {
    const long long m = static_cast<long long>(values.size());
    long long q = j / m, r = j % m;
    if (r < 0) { r += m; --q; }
    return values[static_cast<std::size_t>(r)] + winding * static_cast<double>(q);
}

void PseudoCDF::validate() const {
    if (values.empty())
        throw std::invalid_argument("PseudoCDF: empty grid");
    for (std::size_t j = 0; j + 1 < values.size(); ++j)
        if (values[j + 1] < values[j])
            throw std::invalid_argument("PseudoCDF: not nondecreasing");
    if (values.front() + winding < values.back())
        throw std::invalid_argument("PseudoCDF: winding inconsistent with values");
}

double cdf_distance(const PseudoCDF& a, const PseudoCDF& b) {
    if (a.grid_size() != b.grid_size())
        throw std::invalid_argument("cdf_distance: mismatched grids");
    double d = 0.0;
    for (std::size_t j = 0; j < a.grid_size(); ++j)
        d = std::max(d, std::abs(a.values[j] - b.values[j]));
    return d;
}

double PeriodicDensity::node_angle(std::size_t j) const {
    return kTwoPi * static_cast<double>(j) / static_cast<double>(values.size());
}

double PeriodicDensity::mass() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * kTwoPi / static_cast<double>(values.size());
}

double PeriodicDensity::maximum() const {
    return *std::max_element(values.begin(), values.end());
}

double PeriodicDensity::minimum() const {
    return *std::min_element(values.begin(), values.end());
}

PeriodicDensity PeriodicDensity::uniform(std::size_t grid_size) {
    PeriodicDensity d;
    d.values.assign(grid_size, 1.0 / kTwoPi);
    return d;
}

PseudoCDF cumulative_cdf(const PeriodicDensity& density) {
    const std::size_t m = density.grid_size();
    const double dtheta = kTwoPi / static_cast<double>(m);
    PseudoCDF out;
    out.values.resize(m);
    out.values[0] = 0.0;
    for (std::size_t j = 1; j < m; ++j)
        out.values[j] = out.values[j - 1] + 0.5 * dtheta * (density.values[j - 1] + density.values[j]);
    out.winding = out.values[m - 1] + 0.5 * dtheta * (density.values[m - 1] + density.values[0]);
    return out;
}

PseudoCDF uniform_cdf(std::size_t grid_size) {
    PseudoCDF out;
    out.values.resize(grid_size);
    for (std::size_t j = 0; j < grid_size; ++j)
        out.values[j] = static_cast<double>(j) / static_cast<double>(grid_size);
    out.winding = 1.0;
    return out;
}

std::complex<double> FourierCoefficients::mode(int n) const {
    if (n < -max_mode || n > max_mode)
        throw std::out_of_range("FourierCoefficients: mode outside truncation");
    return coefficients[static_cast<std::size_t>(n + max_mode)];
}

}  // namespace dyson
