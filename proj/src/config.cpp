#include "dyson/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace dyson {

std::string channel_name(Channel c) {
    switch (c) {
        case Channel::Particles: return "particles";
        case Channel::Matrix: return "matrix";
        case Channel::Density: return "density";
        case Channel::Primitive: return "primitive";
        case Channel::Compare: return "compare";
        case Channel::Report: return "report";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& value, int line) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError(line, "expected a number, got '" + value + "'");
    }
    if (used != value.size()) throw ConfigError(line, "trailing characters in number '" + value + "'");
    return out;
}

std::size_t parse_count(const std::string& value, int line, const std::string& key) {
    const double d = parse_double(value, line);
    if (d <= 0.0 || d != std::floor(d))
        throw ConfigError(line, key + " must be a positive integer");
    return static_cast<std::size_t>(d);
}

std::uint64_t parse_seed(const std::string& value, int line) {
    try {
        std::size_t used = 0;
        const auto out = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return out;
    } catch (const std::exception&) {
        throw ConfigError(line, "seed must be a nonnegative integer");
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    bool have_channel = false;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::string stripped = hash == std::string::npos ? raw : raw.substr(0, hash);
        stripped = trim(stripped);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw ConfigError(line, "empty key");
        if (value.empty()) throw ConfigError(line, "empty value for '" + key + "'");

        if (key == "channel") {
            have_channel = true;
            if (value == "particles") cfg.channel = Channel::Particles;
            else if (value == "matrix") cfg.channel = Channel::Matrix;
            else if (value == "density") cfg.channel = Channel::Density;
            else if (value == "primitive") cfg.channel = Channel::Primitive;
            else if (value == "compare") cfg.channel = Channel::Compare;
            else if (value == "report") cfg.channel = Channel::Report;
            else throw ConfigError(line, "unknown channel '" + value + "'");
        } else if (key == "N") {
            cfg.particle_count = parse_count(value, line, "N");
        } else if (key == "M") {
            cfg.grid_size = parse_count(value, line, "M");
        } else if (key == "T") {
            const double t = parse_double(value, line);
            if (t < 0.0) throw ConfigError(line, "T must be >= 0");
            cfg.total_time = t;
        } else if (key == "dt") {
            const double dt = parse_double(value, line);
            if (dt <= 0.0) throw ConfigError(line, "dt must be > 0");
            cfg.dt = dt;
        } else if (key == "epsilon") {
            const double eps = parse_double(value, line);
            if (eps < 0.0) throw ConfigError(line, "epsilon must be >= 0");
            cfg.epsilon = eps;
        } else if (key == "seed") {
            cfg.seed = parse_seed(value, line);
        } else if (key == "runs") {
            cfg.runs = parse_count(value, line, "runs");
        } else if (key == "record_every") {
            cfg.record_every = parse_count(value, line, "record_every");
        } else if (key == "initial") {
            try {
                cfg.initial = InitialSpec::parse(value);
            } catch (const std::exception& e) {
                throw ConfigError(line, e.what());
            }
        } else if (key == "out") {
            cfg.output_dir = value;
        } else if (key == "input") {
            cfg.input = value;
        } else if (key == "Ns") {
            cfg.compare_counts.clear();
            std::stringstream list(value);
            std::string item;
            while (std::getline(list, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                cfg.compare_counts.push_back(parse_count(item, line, "Ns"));
            }
            if (cfg.compare_counts.size() < 2)
                throw ConfigError(line, "Ns needs at least two particle counts");
        } else {
            throw ConfigError(line, "unknown key '" + key + "'");
        }
    }
    if (!have_channel) throw ConfigError(0, "missing mandatory key 'channel'");
    if (cfg.channel == Channel::Report && cfg.input.empty())
        throw ConfigError(0, "report channel needs 'input'");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace dyson
