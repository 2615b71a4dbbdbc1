// dyson_main.cpp
// Batch CLI: dyson <channel> --config <path> [--strict] [--seed k] [--out dir]
// [--gnuplot]. The config file carries the experiment description; command
// line flags override seed and output directory.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "dyson/experiment.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::string out_override;
    long long seed_override = -1;
    bool strict = false;
    bool gnuplot = false;
};

int dispatch(dyson::Channel channel, const CliArgs& args) {
    dyson::ExperimentConfig cfg = dyson::load_config(args.config_path);
    if (cfg.channel != channel) {
        std::fprintf(stderr, "error: config declares channel '%s' but subcommand is '%s'\n",
                     dyson::channel_name(cfg.channel).c_str(),
                     dyson::channel_name(channel).c_str());
        return 1;
    }
    if (args.seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed_override);
    if (!args.out_override.empty()) cfg.output_dir = args.out_override;
    dyson::RunOptions opts;
    opts.strict = args.strict;
    opts.gnuplot = args.gnuplot;
    return dyson::run_experiment(cfg, opts);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"unitary Dyson Brownian motion: particle, matrix and PDE channels"};
    app.require_subcommand(1);

    const std::pair<const char*, dyson::Channel> channels[] = {
        {"particles", dyson::Channel::Particles}, {"matrix", dyson::Channel::Matrix},
        {"density", dyson::Channel::Density},     {"primitive", dyson::Channel::Primitive},
        {"compare", dyson::Channel::Compare},     {"report", dyson::Channel::Report},
    };

    CliArgs args;
    for (const auto& [name, channel] : channels) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config_path, "experiment config file")->required();
        sub->add_option("--seed", args.seed_override, "override the config seed");
        sub->add_option("--out", args.out_override, "override the output directory");
        sub->add_flag("--strict", args.strict, "exit 2 on bound violations");
        sub->add_flag("--gnuplot", args.gnuplot, "emit a plot script next to the CSVs");
        sub->callback([channel, &args]() {
            const int code = dispatch(channel, args);
            if (code != 0) std::exit(code);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
