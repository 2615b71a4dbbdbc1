#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "dyson/experiment.hpp"

using namespace dyson;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("parse_config accepts a minimal document") {
    const auto cfg = parse_config("channel = density\nM = 256\nT = 1.0\n");
    CHECK(cfg.channel == Channel::Density);
    CHECK(cfg.grid_size == 256);
    CHECK(cfg.total_time == 1.0);
    CHECK(cfg.seed == 1);  // default
}

TEST_CASE("parse_config diagnostics carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_config("channel = warp\n"),
                         doctest::Contains("unknown channel"), ConfigError);
    try {
        parse_config("channel = particles\nN = -4\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_WITH_AS(parse_config("channel = density\nwibble = 3\n"),
                         doctest::Contains("unknown key"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("M = 64\n"), doctest::Contains("channel"), ConfigError);
    // comments and blank lines are fine
    CHECK_NOTHROW(parse_config("# experiment\n\nchannel = density # inline\n"));
}

TEST_CASE("density channel artifacts and determinism") {
    const auto dir = fresh_dir("dyson_cli_density");
    ExperimentConfig cfg;
    cfg.channel = Channel::Density;
    cfg.grid_size = 64;
    cfg.total_time = 0.05;
    cfg.initial = InitialSpec::parse("cosine(0.5)");
    cfg.output_dir = (dir / "a").string();
    CHECK(run_experiment(cfg) == 0);
    cfg.output_dir = (dir / "b").string();
    CHECK(run_experiment(cfg) == 0);

    const auto csv_a = slurp(dir / "a" / "density.csv");
    const auto csv_b = slurp(dir / "b" / "density.csv");
    CHECK(csv_a == csv_b);  // byte-identical rerun
    CHECK(csv_a.rfind("t,mu0,mu1", 0) == 0);

    // round trip through the CSV reader
    const auto traj = read_density_csv((dir / "a" / "density.csv").string());
    CHECK(traj.states.front().grid_size() == 64);
    const auto again = fresh_dir("dyson_cli_density_rt");
    write_density_csv(traj, (again / "copy.csv").string());
    CHECK(slurp(again / "copy.csv") == csv_a);
}

TEST_CASE("particle channel respects the seed override path") {
    const auto dir = fresh_dir("dyson_cli_particles");
    ExperimentConfig cfg;
    cfg.channel = Channel::Particles;
    cfg.particle_count = 8;
    cfg.total_time = 0.02;
    cfg.dt = 1e-3;
    cfg.seed = 7;
    cfg.initial = InitialSpec::parse("equally_spaced");
    cfg.output_dir = (dir / "s7").string();
    CHECK(run_experiment(cfg) == 0);
    cfg.output_dir = (dir / "s8").string();
    cfg.seed = 8;
    CHECK(run_experiment(cfg) == 0);
    CHECK(slurp(dir / "s7" / "trajectory.csv") != slurp(dir / "s8" / "trajectory.csv"));
    const auto summary = slurp(dir / "s7" / "summary.json");
    CHECK(summary.find("\"rejected_steps\"") != std::string::npos);

    // the summary JSON reloads into the values that were configured
    const auto echoed = nlohmann::json::parse(summary);
    CHECK(echoed.at("channel") == "particles");
    CHECK(echoed.at("N") == 8);
    CHECK(echoed.at("T") == 0.02);
    CHECK(echoed.at("dt") == 1e-3);
    CHECK(echoed.at("seed") == 7);
    CHECK(echoed.at("initial") == "equally_spaced");
}

TEST_CASE("report channel consumes a saved density trajectory") {
    const auto dir = fresh_dir("dyson_cli_report");
    ExperimentConfig density;
    density.channel = Channel::Density;
    density.grid_size = 128;
    density.total_time = 0.2;
    density.initial = InitialSpec::parse("cosine(0.5)");
    density.output_dir = (dir / "density").string();
    REQUIRE(run_experiment(density) == 0);

    ExperimentConfig report;
    report.channel = Channel::Report;
    report.input = (dir / "density" / "density.csv").string();
    report.output_dir = (dir / "report").string();
    RunOptions strict;
    strict.strict = true;
    CHECK(run_experiment(report, strict) == 0);
    CHECK(fs::exists(dir / "report" / "report.json"));
    CHECK(fs::exists(dir / "report" / "series.csv"));

    // negative control: scale the trajectory so mass fails, strict exits 2
    auto traj = read_density_csv(report.input);
    for (auto& state : traj.states)
        for (double& v : state.values) v *= 1.1;
    write_density_csv(traj, (dir / "density" / "scaled.csv").string());
    report.input = (dir / "density" / "scaled.csv").string();
    report.output_dir = (dir / "report_bad").string();
    CHECK(run_experiment(report, strict) == 2);
}

TEST_CASE("compare channel orders the empirical errors") {
    const auto dir = fresh_dir("dyson_cli_compare");
    ExperimentConfig cfg;
    cfg.channel = Channel::Compare;
    cfg.grid_size = 128;
    cfg.total_time = 0.1;
    cfg.dt = 2e-3;
    cfg.runs = 8;
    cfg.compare_counts = {8, 32};
    cfg.initial = InitialSpec::parse("cosine(0.8)");
    cfg.output_dir = (dir).string();
    RunOptions strict;
    strict.strict = true;
    CHECK(run_experiment(cfg, strict) == 0);
    const auto summary = slurp(dir / "summary.json");
    CHECK(summary.find("error_monotone_in_N") != std::string::npos);
    CHECK(fs::exists(dir / "compare_cdfs.csv"));
}

TEST_CASE("gnuplot flag emits a script") {
    const auto dir = fresh_dir("dyson_cli_gnuplot");
    ExperimentConfig cfg;
    cfg.channel = Channel::Primitive;
    cfg.grid_size = 64;
    cfg.total_time = 0.05;
    cfg.initial = InitialSpec::parse("cosine(0.5)");
    cfg.output_dir = dir.string();
    RunOptions opts;
    opts.gnuplot = true;
    CHECK(run_experiment(cfg, opts) == 0);
    CHECK(fs::exists(dir / "plot.gp"));
}

TEST_CASE("initial preset parsing") {
    CHECK(InitialSpec::parse("uniform").kind == InitialSpec::Kind::Uniform);
    CHECK(InitialSpec::parse("cosine_bump(50)").parameter == 50.0);
    CHECK(InitialSpec::parse("csv:some/path.csv").path == "some/path.csv");
    CHECK_THROWS_AS(InitialSpec::parse("warp"), std::invalid_argument);
    CHECK_THROWS_AS(InitialSpec::parse("cosine(1.5)"), std::invalid_argument);
    CHECK(InitialSpec::parse("cosine(1)").parameter == 1.0);
    CHECK_THROWS_AS(density_preset(InitialSpec::parse("one_atom"), 64), std::invalid_argument);
    CHECK_THROWS_AS(particle_preset(InitialSpec::parse("one_atom"), 8), std::invalid_argument);
}

TEST_CASE("quantile particles reproduce smooth preset mass") {
    const auto config = particle_preset(InitialSpec::parse("cosine(1)"), 64);
    CHECK(config.count() == 64);
    // empirical CDF of the quantile configuration tracks the analytic CDF
    double sup = 0.0;
    for (int j = 0; j < 256; ++j) {
        const double th = kTwoPi * j / 256.0;
        const double exact = (th + std::sin(th)) / kTwoPi;
        sup = std::max(sup, std::abs(empirical_cdf(config, th) - exact));
    }
    CHECK(sup <= 1.0 / 64.0 + 1e-3);
}
