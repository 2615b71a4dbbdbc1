#include "dyson/presets.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dyson {

InitialSpec InitialSpec::parse(const std::string& text) {
    InitialSpec spec;
    auto open = text.find('(');
    if (text == "uniform") {
        spec.kind = Kind::Uniform;
    } else if (text == "equally_spaced") {
        spec.kind = Kind::EquallySpaced;
    } else if (text == "one_atom") {
        spec.kind = Kind::OneAtom;
    } else if (text == "two_cluster") {
        spec.kind = Kind::TwoCluster;
    } else if (text.rfind("csv:", 0) == 0) {
        spec.kind = Kind::Csv;
        spec.path = text.substr(4);
        if (spec.path.empty()) throw std::invalid_argument("initial: empty csv path");
    } else if (open != std::string::npos && text.back() == ')') {
        const std::string head = text.substr(0, open);
        const std::string arg = text.substr(open + 1, text.size() - open - 2);
        std::size_t used = 0;
        double value = std::stod(arg, &used);
        if (used != arg.size()) throw std::invalid_argument("initial: bad parameter '" + arg + "'");
        if (head == "cosine_bump") {
            if (value <= 0.0) throw std::invalid_argument("initial: cosine_bump needs kappa > 0");
            spec.kind = Kind::CosineBump;
        } else if (head == "cosine") {
            if (std::abs(value) > 1.0)
                throw std::invalid_argument("initial: cosine amplitude must satisfy |a| <= 1");
            spec.kind = Kind::Cosine;
        } else {
            throw std::invalid_argument("initial: unknown preset '" + text + "'");
        }
        spec.parameter = value;
    } else {
        throw std::invalid_argument("initial: unknown preset '" + text + "'");
    }
    return spec;
}

std::string InitialSpec::describe() const {
    switch (kind) {
        case Kind::Uniform: return "uniform";
        case Kind::EquallySpaced: return "equally_spaced";
        case Kind::OneAtom: return "one_atom";
        case Kind::TwoCluster: return "two_cluster";
        case Kind::CosineBump: {
            std::ostringstream s;
            s << "cosine_bump(" << parameter << ")";
            return s.str();
        }
        case Kind::Cosine: {
            std::ostringstream s;
            s << "cosine(" << parameter << ")";
            return s.str();
        }
        case Kind::Csv: return "csv:" + path;
    }
    return "?";
}

namespace {

std::vector<double> read_csv_column(const std::string& path, std::size_t expected) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("initial csv: cannot open " + path);
    std::vector<double> values;
    std::string token;
    while (std::getline(in, token)) {
        std::stringstream line(token);
        std::string cell;
        while (std::getline(line, cell, ',')) {
            if (cell.empty()) continue;
            values.push_back(std::stod(cell));
        }
    }
    if (expected != 0 && values.size() != expected) {
        std::ostringstream msg;
        msg << "initial csv: expected " << expected << " values, got " << values.size();
        throw std::runtime_error(msg.str());
    }
    return values;
}

PeriodicDensity normalized(std::vector<double> raw) {
    PeriodicDensity d;
    d.values = std::move(raw);
    const double mass = d.mass();
    if (!(mass > 0.0)) throw std::invalid_argument("density preset: nonpositive mass");
    for (double& v : d.values) v /= mass;
    return d;
}

double von_mises_unnormalized(double theta, double kappa, double center) {
    return std::exp(kappa * (std::cos(theta - center) - 1.0));
}

}  // namespace

PeriodicDensity density_preset(const InitialSpec& spec, std::size_t grid_size) {
    const double dtheta = kTwoPi / static_cast<double>(grid_size);
    std::vector<double> v(grid_size);
    switch (spec.kind) {
        case InitialSpec::Kind::Uniform:
        case InitialSpec::Kind::EquallySpaced:
            return PeriodicDensity::uniform(grid_size);
        case InitialSpec::Kind::Cosine:
            for (std::size_t j = 0; j < grid_size; ++j)
                v[j] = (1.0 + spec.parameter * std::cos(dtheta * static_cast<double>(j))) / kTwoPi;
            return PeriodicDensity{std::move(v)};
        case InitialSpec::Kind::CosineBump:
            for (std::size_t j = 0; j < grid_size; ++j)
                v[j] = von_mises_unnormalized(dtheta * static_cast<double>(j), spec.parameter, kPi);
            return normalized(std::move(v));
        case InitialSpec::Kind::TwoCluster:
            for (std::size_t j = 0; j < grid_size; ++j) {
                const double th = dtheta * static_cast<double>(j);
                v[j] = von_mises_unnormalized(th, 8.0, 0.5 * kPi) +
                       von_mises_unnormalized(th, 8.0, 1.5 * kPi);
            }
            return normalized(std::move(v));
        case InitialSpec::Kind::Csv:
            return normalized(read_csv_column(spec.path, grid_size));
        case InitialSpec::Kind::OneAtom:
            throw std::invalid_argument(
                "density preset: atomic data is not an L1 density; use the particle or "
                "primitive channel");
    }
    throw std::logic_error("density_preset: unreachable");
}

PseudoCDF cdf_preset(const InitialSpec& spec, std::size_t grid_size) {
    switch (spec.kind) {
        case InitialSpec::Kind::Uniform:
        case InitialSpec::Kind::EquallySpaced:
            return uniform_cdf(grid_size);
        case InitialSpec::Kind::Cosine: {
            const double a = spec.parameter;
            return tabulate_cdf(grid_size,
                                [a](double th) { return (th + a * std::sin(th)) / kTwoPi; });
        }
        case InitialSpec::Kind::OneAtom: {
            PseudoCDF f;
            f.values.assign(grid_size, 0.0);
            for (std::size_t j = grid_size / 2; j < grid_size; ++j) f.values[j] = 1.0;
            f.winding = 1.0;
            return f;
        }
        case InitialSpec::Kind::CosineBump:
        case InitialSpec::Kind::TwoCluster:
        case InitialSpec::Kind::Csv:
            return cumulative_cdf(density_preset(spec, grid_size));
    }
    throw std::logic_error("cdf_preset: unreachable");
}

LiftedConfiguration quantile_particles(const PseudoCDF& cdf, std::size_t count) {
    const std::size_t m = cdf.grid_size();
    const double dtheta = kTwoPi / static_cast<double>(m);
    std::vector<double> positions(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double q = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        // find the grid cell with F(theta_j) <= q <= F(theta_{j+1})
        std::size_t lo = 0, hi = m;  // nodes 0..m, node m via winding
        while (lo + 1 < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cdf.node(static_cast<long long>(mid)) <= q)
                lo = mid;
            else
                hi = mid;
        }
        const double f_lo = cdf.node(static_cast<long long>(lo));
        const double f_hi = cdf.node(static_cast<long long>(lo) + 1);
        const double frac = f_hi > f_lo ? (q - f_lo) / (f_hi - f_lo) : 0.5;
        positions[i] = dtheta * (static_cast<double>(lo) + frac);
    }
    return lift_configuration(std::span<const double>(positions), 0.0);
}

LiftedConfiguration particle_preset(const InitialSpec& spec, std::size_t count) {
    switch (spec.kind) {
        case InitialSpec::Kind::Uniform:
        case InitialSpec::Kind::EquallySpaced: {
            std::vector<double> p(count);
            for (std::size_t j = 0; j < count; ++j)
                p[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(count);
            return LiftedConfiguration(std::move(p), 0.0);
        }
        case InitialSpec::Kind::OneAtom:
            throw std::invalid_argument("particle preset: duplicate angles are rejected");
        case InitialSpec::Kind::Csv: {
            auto angles = read_csv_column(spec.path, 0);
            if (angles.size() != count)
                throw std::runtime_error("particle preset: csv size disagrees with N");
            return lift_configuration(std::span<const double>(angles), 0.0);
        }
        default:
            return quantile_particles(cdf_preset(spec, 4096), count);
    }
}

ComplexMatrix unitary_preset(const InitialSpec& spec, std::size_t dimension) {
    const auto config = particle_preset(spec, dimension);
    ComplexMatrix u(dimension);
    for (std::size_t j = 0; j < dimension; ++j)
        u(j, j) = std::polar(1.0, config.positions()[j]);
    return u;
}

}  // namespace dyson
