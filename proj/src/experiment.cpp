#include "dyson/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dyson/diagnostics.hpp"
#include "dyson/matrix.hpp"
#include "dyson/primitive.hpp"

namespace dyson {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

PseudoCDF average_empirical_cdf(const std::vector<LiftedConfiguration>& samples,
                                std::size_t grid_size) {
    if (samples.empty()) throw std::invalid_argument("average_empirical_cdf: no samples");
    PseudoCDF mean;
    mean.values.assign(grid_size, 0.0);
    mean.winding = 1.0;
    for (const auto& config : samples)
        for (std::size_t j = 0; j < grid_size; ++j)
            mean.values[j] += empirical_cdf(
                config, kTwoPi * static_cast<double>(j) / static_cast<double>(grid_size));
    for (double& v : mean.values) v /= static_cast<double>(samples.size());
    return mean;
}

namespace {

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : f_(std::fopen(path.c_str(), "wb")) {
        if (!f_) throw std::runtime_error("cannot open " + path + " for writing");
    }
    ~CsvWriter() {
        if (f_) std::fclose(f_);
    }
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void raw(const std::string& text) { std::fprintf(f_, "%s", text.c_str()); }
    void numbered_header(const std::string& first, const std::string& prefix, std::size_t count) {
        std::fprintf(f_, "%s", first.c_str());
        for (std::size_t j = 0; j < count; ++j) std::fprintf(f_, ",%s%zu", prefix.c_str(), j);
        std::fprintf(f_, "\n");
    }
    void row(double t, std::span<const double> values) {
        std::fprintf(f_, "%.17g", t);
        for (double v : values) std::fprintf(f_, ",%.17g", v);
        std::fprintf(f_, "\n");
    }

private:
    std::FILE* f_;
};

std::string run_suffix(std::size_t run, std::size_t runs) {
    if (runs <= 1) return "";
    char buf[16];
    std::snprintf(buf, sizeof(buf), "_run%03zu", run);
    return buf;
}

ordered_json config_echo(const ExperimentConfig& cfg) {
    ordered_json j;
    j["channel"] = channel_name(cfg.channel);
    j["N"] = cfg.particle_count;
    j["M"] = cfg.grid_size;
    j["T"] = cfg.total_time;
    j["dt"] = cfg.dt;
    j["epsilon"] = cfg.viscosity_for(cfg.grid_size);
    j["seed"] = cfg.seed;
    j["runs"] = cfg.runs;
    j["record_every"] = cfg.record_every;
    j["initial"] = cfg.initial.describe();
    j["out"] = cfg.output_dir;
    if (!cfg.input.empty()) j["input"] = cfg.input;
    if (cfg.channel == Channel::Compare) j["Ns"] = cfg.compare_counts;
    return j;
}

void write_gnuplot(const fs::path& dir, const std::string& csv, const std::string& title,
                   std::size_t columns) {
    std::ofstream out(dir / "plot.gp", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write plot.gp");
    out << "set datafile separator ','\n"
        << "set key off\nset xlabel 't'\nset title '" << title << "'\n"
        << "plot for [k=2:" << columns + 1 << "] '" << csv << "' using 1:k with lines\n";
}

int run_particles(const ExperimentConfig& cfg, const RunOptions& opt, const fs::path& dir,
                  ordered_json& summary) {
    const auto params = SDEParameters::dyson(cfg.particle_count);
    std::uint64_t rejected = 0;
    bool warned = false;
    for (std::size_t r = 0; r < cfg.runs; ++r) {
        const auto initial = particle_preset(cfg.initial, cfg.particle_count);
        const auto traj =
            simulate(initial, params, cfg.total_time, cfg.dt, cfg.seed + r, cfg.record_every);
        rejected += traj.rejected_steps;
        warned = warned || traj.well_posedness_warning;
        CsvWriter csv((dir / ("trajectory" + run_suffix(r, cfg.runs) + ".csv")).string());
        csv.numbered_header("t", "x", cfg.particle_count);
        for (std::size_t k = 0; k < traj.times.size(); ++k)
            csv.row(traj.times[k], traj.states[k].positions());
    }
    summary["rejected_steps"] = rejected;
    if (warned) summary["warning"] = "beta < N^2/2: explosion is not ruled out";
    if (opt.gnuplot) write_gnuplot(dir, "trajectory.csv", "particle lifts", cfg.particle_count);
    return 0;
}

int run_matrix(const ExperimentConfig& cfg, const RunOptions& opt, const fs::path& dir,
               ordered_json&) {
    for (std::size_t r = 0; r < cfg.runs; ++r) {
        const auto initial = unitary_preset(cfg.initial, cfg.particle_count);
        const auto traj = simulate_matrix(cfg.particle_count, cfg.total_time, cfg.dt,
                                          cfg.seed + r, cfg.record_every, &initial);
        CsvWriter csv((dir / ("phases" + run_suffix(r, cfg.runs) + ".csv")).string());
        csv.numbered_header("t", "theta", cfg.particle_count);
        for (std::size_t k = 0; k < traj.times.size(); ++k) csv.row(traj.times[k], traj.phases[k]);
    }
    if (opt.gnuplot) write_gnuplot(dir, "phases.csv", "eigenphases", cfg.particle_count);
    return 0;
}

int run_density(const ExperimentConfig& cfg, const RunOptions& opt, const fs::path& dir,
                ordered_json& summary) {
    const auto initial = density_preset(cfg.initial, cfg.grid_size);
    DensitySolveOptions solve_opts;
    solve_opts.record_stride = cfg.record_every;
    const auto traj =
        solve_density(initial, cfg.total_time, cfg.viscosity_for(cfg.grid_size), solve_opts);
    write_density_csv(traj, (dir / "density.csv").string());
    summary["steps_taken"] = traj.steps_taken;
    summary["worst_minimum"] = traj.worst_minimum;
    if (opt.gnuplot) write_gnuplot(dir, "density.csv", "density", cfg.grid_size);
    return 0;
}

int run_primitive(const ExperimentConfig& cfg, const RunOptions& opt, const fs::path& dir,
                  ordered_json& summary) {
    const auto initial = cdf_preset(cfg.initial, cfg.grid_size);
    PrimitiveSolveOptions solve_opts;
    solve_opts.record_stride = cfg.record_every;
    const auto traj = solve_primitive(initial, cfg.total_time, solve_opts);
    CsvWriter csv((dir / "primitive.csv").string());
    csv.numbered_header("t", "F", cfg.grid_size);
    for (std::size_t k = 0; k < traj.times.size(); ++k)
        csv.row(traj.times[k], traj.states[k].values);
    summary["steps_taken"] = traj.steps_taken;
    if (opt.gnuplot) write_gnuplot(dir, "primitive.csv", "pseudo-CDF", cfg.grid_size);
    return 0;
}

int run_compare(const ExperimentConfig& cfg, const RunOptions& opt, const fs::path& dir,
                ordered_json& summary) {
    const std::size_t m = cfg.grid_size;
    const auto f0 = cdf_preset(cfg.initial, m);
    const auto reference = solve_primitive(f0, cfg.total_time).states.back();

    std::vector<PseudoCDF> averages;
    std::vector<double> errors;
    for (std::size_t n : cfg.compare_counts) {
        const auto params = SDEParameters::dyson(n);
        const auto initial = particle_preset(cfg.initial, n);
        std::vector<LiftedConfiguration> finals;
        finals.reserve(cfg.runs);
        for (std::size_t r = 0; r < cfg.runs; ++r) {
            const auto traj = simulate(initial, params, cfg.total_time, cfg.dt, cfg.seed + r,
                                       static_cast<std::size_t>(-1));
            finals.push_back(traj.states.back());
        }
        averages.push_back(average_empirical_cdf(finals, m));
        errors.push_back(cdf_distance(averages.back(), reference));
    }

    bool monotone = true;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i)
        if (!(errors[i + 1] < errors[i])) monotone = false;

    summary["errors"] = ordered_json::array();
    for (std::size_t i = 0; i < errors.size(); ++i)
        summary["errors"].push_back({{"N", cfg.compare_counts[i]}, {"sup_distance", errors[i]}});
    summary["error_monotone_in_N"] = monotone;

    CsvWriter csv((dir / "compare_cdfs.csv").string());
    {
        std::ostringstream head;
        head << "theta,F_ref";
        for (std::size_t n : cfg.compare_counts) head << ",F_N" << n;
        head << "\n";
        csv.raw(head.str());
    }
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> cells;
        cells.push_back(reference.values[j]);
        for (const auto& avg : averages) cells.push_back(avg.values[j]);
        csv.row(kTwoPi * static_cast<double>(j) / static_cast<double>(m), cells);
    }
    if (opt.gnuplot)
        write_gnuplot(dir, "compare_cdfs.csv", "empirical vs primitive CDF",
                      cfg.compare_counts.size() + 1);
    return (opt.strict && !monotone) ? 2 : 0;
}

int run_report(const ExperimentConfig& cfg, const RunOptions& opt, const fs::path& dir,
               ordered_json& summary) {
    const auto traj = read_density_csv(cfg.input);
    BoundReportOptions report_opts;
    report_opts.viscosity =
        cfg.viscosity_for(traj.states.front().grid_size());  // epsilon of the saved solve
    const auto report = bound_report(traj, report_opts);
    write_series_csv(report, (dir / "series.csv").string());
    write_report_json(report, (dir / "report.json").string(), "series.csv");
    summary["all_passed"] = report.all_passed();
    if (opt.gnuplot) write_gnuplot(dir, "series.csv", "bound series", 6);
    return (opt.strict && !report.all_passed()) ? 2 : 0;
}

}  // namespace

void write_density_csv(const DensityTrajectory& trajectory, const std::string& path) {
    CsvWriter csv(path);
    const std::size_t m = trajectory.states.empty() ? 0 : trajectory.states.front().grid_size();
    csv.numbered_header("t", "mu", m);
    for (std::size_t k = 0; k < trajectory.times.size(); ++k)
        csv.row(trajectory.times[k], trajectory.states[k].values);
}

DensityTrajectory read_density_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    DensityTrajectory traj;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty trajectory file " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
        if (values.size() < 2) throw std::runtime_error("malformed trajectory row in " + path);
        traj.times.push_back(values.front());
        traj.states.push_back(PeriodicDensity{{values.begin() + 1, values.end()}});
    }
    if (traj.states.empty()) throw std::runtime_error("no states in " + path);
    return traj;
}

int run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
    const auto started = std::chrono::steady_clock::now();
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);

    ordered_json summary = config_echo(cfg);
    int code = 0;
    switch (cfg.channel) {
        case Channel::Particles: code = run_particles(cfg, opt, dir, summary); break;
        case Channel::Matrix: code = run_matrix(cfg, opt, dir, summary); break;
        case Channel::Density: code = run_density(cfg, opt, dir, summary); break;
        case Channel::Primitive: code = run_primitive(cfg, opt, dir, summary); break;
        case Channel::Compare: code = run_compare(cfg, opt, dir, summary); break;
        case Channel::Report: code = run_report(cfg, opt, dir, summary); break;
    }

    summary["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    summary["exit_code"] = code;
    std::ofstream out(dir / "summary.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write summary.json");
    out << summary.dump(2) << "\n";
    return code;
}

}  // namespace dyson
