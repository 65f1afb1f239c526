// config.hpp - run configuration in a flat `section.key = value` text format.
//
// Lines are `key = value`; `#` starts a comment; blank lines are ignored.
// Lists are comma separated. Unknown keys are rejected.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sbnoise/analysis.hpp"
#include "sbnoise/core.hpp"
#include "sbnoise/dynamics.hpp"
#include "sbnoise/spectral.hpp"
#include "sbnoise/stochastic.hpp"

namespace sbnoise {

enum class Model { spin_boson, noise, both };

[[nodiscard]] std::string to_string(Model m);
[[nodiscard]] Model parse_model(const std::string& text);

struct OutputPaths {
    std::string csv;
    std::string svg;
};

struct RunConfig {
    Model model{Model::both};
    SpinBosonMode mode{SpinBosonMode::hermitian};
    SystemParams system;
    std::optional<EnvironmentParams> environment;
    std::optional<CoefficientSet> coefficients;
    NoiseParams noise;
    IntegratorSpec integrator;
    std::optional<EnsembleSpec> ensemble;
    std::optional<QuadratureSpec> quadrature;
    TimeWindow window{kBenchmarkWindow};
    std::vector<double> sweep_rates{default_sweep_rates()};
    std::optional<DecoherenceGridSpec> tau;
    OutputPaths output;

    /// Cross-field checks: at most one of environment/coefficients, valid
    /// sub-blocks. Commands add their own requirements on top.
    void validate() const;

    /// Explicit coefficients, or the closed forms of the environment at
    /// system.delta0. Throws ConfigError when neither is present.
    [[nodiscard]] CoefficientSet resolved_coefficients() const;

    /// Shared settings for the two-model comparison and sweeps.
    [[nodiscard]] ComparisonConfig comparison(bool derive_per_rate) const;
};

/// Ordered key-value view of a config file.
using KeyValues = std::map<std::string, std::string>;

[[nodiscard]] KeyValues parse_key_values(const std::string& text);
[[nodiscard]] RunConfig parse_config(const std::string& text);
[[nodiscard]] RunConfig load_config(const std::string& path);

/// Canonical text form; parse_config(serialize(c)) serializes identically.
[[nodiscard]] std::string serialize(const RunConfig& config);

}  // namespace sbnoise
