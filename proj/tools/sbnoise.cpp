// sbnoise - command-line front end.

#include <CLI11.hpp>

#include <iostream>
#include <thread>

#include "sbnoise/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spin-boson versus classical-noise decoherence for a two-level channel model"};
    app.require_subcommand(1);

    sbnoise::cli::CommandOptions opts;
    std::string config_path;
    std::string mode;
    std::uint64_t seed = 0;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", config_path, "run configuration file");
        if (needs_config) c->required();
        sub->add_option("--out", opts.out, "output CSV path (overrides output.csv)");
        sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    };

    auto* coeffs = app.add_subcommand("coeffs", "closed-form (and optionally numeric) master-equation coefficients");
    add_common(coeffs, true);
    coeffs->add_flag("--numeric", opts.numeric, "also evaluate the coefficients by nested quadrature");

    auto* evolve = app.add_subcommand("evolve", "integrate one model from the superposition state");
    add_common(evolve, true);
    evolve->add_option("--mode", mode, "spin-boson mode: verbatim | hermitian");

    auto* ensemble = app.add_subcommand("ensemble", "Monte Carlo average over noise realizations");
    add_common(ensemble, true);
    ensemble->add_option("--seed", seed, "master seed (overrides ensemble.seed)");

    auto* compare = app.add_subcommand("compare", "spin-boson versus noise coherence and Delta R");
    add_common(compare, true);
    compare->add_option("--svg", opts.svg, "chart output path");
    compare->add_option("--mode", mode, "spin-boson mode: verbatim | hermitian");
    compare->add_flag("--derive-coeffs", opts.derive_coeffs, "closed-form coefficients from the environment");

    auto* sweep = app.add_subcommand("sweep", "Delta R summary over a list of hopping rates");
    add_common(sweep, true);
    sweep->add_option("--svg", opts.svg, "chart output path");
    sweep->add_option("--series", opts.series, "long-format per-rate Delta R series CSV");
    sweep->add_option("--mode", mode, "spin-boson mode: verbatim | hermitian");
    sweep->add_flag("--derive-coeffs", opts.derive_coeffs, "re-derive coefficients at every rate");

    auto* tau = app.add_subcommand("tau", "decoherence-time estimates over a parameter grid");
    add_common(tau, true);

    auto* demo = app.add_subcommand("demo-figures", "run the preset comparisons, sweep and grid into a directory");
    demo->add_option("--out", opts.out, "output directory (default: figures)");
    demo->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    opts.workers = workers;
    if (ensemble->parsed() && ensemble->count("--seed") > 0) opts.seed = seed;
    if (!mode.empty()) {
        try {
            opts.mode = sbnoise::parse_spin_boson_mode(mode);
        } catch (const sbnoise::ConfigError& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return sbnoise::cli::kConfigError;
        }
    }
    const std::string command = app.get_subcommands().front()->get_name();
    return sbnoise::cli::run(command, config_path, opts, std::cout, std::cerr);
}
