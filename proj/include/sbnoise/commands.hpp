// commands.hpp - the CLI subcommands as in-process functions.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbnoise/config.hpp"

namespace sbnoise::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3, kIoError = 4 };

struct CommandOptions {
    std::string out;     // overrides output.csv (a directory for demo-figures)
    std::string svg;     // overrides output.svg
    std::string series;  // sweep: long-format per-rate Delta R series
    bool numeric{false};
    bool derive_coeffs{false};
    std::optional<SpinBosonMode> mode;
    std::optional<std::uint64_t> seed;
    unsigned workers{1};
};

/// Applies the command-line overrides (mode, seed, output paths) to a config.
[[nodiscard]] RunConfig with_overrides(RunConfig config, const CommandOptions& opts);

// Each command writes its files and a short report to `out`; errors escape as
// exceptions and are mapped to exit codes by run().
int cmd_coeffs(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_evolve(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_ensemble(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_tau(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_demo_figures(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Preset configurations for the demo runs: hopping rate 1e7 s^-1 ("fig3"),
/// 1e8 s^-1 ("fig4"), the default sweep ("fig5") and the decoherence-time grid
/// ("tau"). Unpublished parameters are fixed to omega0 = 1e7 s^-1,
/// D = gamma = alpha = 0.5e7 s^-1, f = 0, hermitian mode.
[[nodiscard]] RunConfig demo_config(const std::string& name);

/// Table rows for the sweep CSV, in input order.
[[nodiscard]] std::string sweep_table_csv(const std::vector<SweepRow>& rows);

/// Human-readable verdict on whether time-mean |Delta R| falls as the rate rises.
[[nodiscard]] std::string sweep_trend_summary(const std::vector<SweepRow>& rows);

/// Dispatches by subcommand name and maps exceptions onto exit codes.
int run(const std::string& command, const std::string& config_path, const CommandOptions& opts, std::ostream& out,
        std::ostream& err);

}  // namespace sbnoise::cli
