// analysis.hpp - model-agreement metric, hopping-rate sweeps and the
// order-of-magnitude decoherence-time estimate.

#pragma once

#include <optional>
#include <vector>

#include "sbnoise/core.hpp"
#include "sbnoise/dynamics.hpp"

namespace sbnoise {

/// Closed time interval used for summaries.
struct TimeWindow {
    double start{0.0};
    double end{0.0};
};

/// Default summary window [0, 4e-7 s].
inline constexpr TimeWindow kBenchmarkWindow{0.0, 4e-7};

/// Delta R(t) = Re rho01 (spin-boson) - Re rho01 (noise).
struct DeltaRSeries {
    std::vector<double> times;
    std::vector<double> values;
    TimeWindow window;
    double max_abs{0.0};        // over samples inside the window
    double time_mean_abs{0.0};  // trapezoidal time average of |Delta R| inside the window
};

/// Throws ConfigError if the grids differ. Without a window the summary
/// covers the whole grid.
[[nodiscard]] DeltaRSeries delta_r(const Trajectory& traj_sb, const Trajectory& traj_noise,
                                   std::optional<TimeWindow> window = std::nullopt);

/// Everything except delta0 that the two-model comparison needs. Exactly one
/// of `coefficients` / `environment` is set; with an environment the closed
/// forms are evaluated at each hopping rate.
struct ComparisonConfig {
    double omega0{0.0};
    std::optional<CoefficientSet> coefficients;
    std::optional<EnvironmentParams> environment;
    NoiseParams noise;
    SpinBosonMode mode{SpinBosonMode::hermitian};
    IntegratorSpec integrator;
    TimeWindow window{kBenchmarkWindow};

    void validate() const;
    [[nodiscard]] CoefficientSet coefficients_at(double delta0) const;
};

struct Comparison {
    double delta0{0.0};
    CoefficientSet coefficients;
    Trajectory spin_boson;
    Trajectory noise;
    DeltaRSeries delta;
};

/// Both models from initial_superposition() on a shared grid.
[[nodiscard]] Comparison compare_models(double delta0, const ComparisonConfig& config);

struct SweepRow {
    double rate{0.0};
    double max_abs{0.0};
    double time_mean_abs{0.0};
    DeltaRSeries series;
};

/// One row per rate in input order; points run concurrently on `workers` threads.
[[nodiscard]] std::vector<SweepRow> sweep_hopping(const std::vector<double>& rates, const ComparisonConfig& config,
                                                  unsigned workers = 1);

/// Default sweep rates {1e6, 5e6, 1e7, 5e7, 1e8} s^-1.
[[nodiscard]] std::vector<double> default_sweep_rates();

/// lambda_dB = hbar / sqrt(2 m kT), SI units (kT in joules).
[[nodiscard]] double thermal_de_broglie(double mass_kg, double kbt_joule);

/// (exp(x) - 1)^-1, switching to exp(-x) where exp(x) would overflow.
[[nodiscard]] double mean_occupation(double omega_over_kbt);

struct DecoherenceInputs {
    double mass{0.0};        // kg
    double kbt{0.0};         // s^-1
    double dispersion{0.0};  // Delta X, m
    double cutoff{0.0};      // Lambda, s^-1
    double frequency{0.0};   // omega, s^-1
    double gamma0{0.0};      // s^-1
};

struct DecoherenceEstimate {
    DecoherenceInputs inputs;
    double lambda_db{0.0};  // m
    double r{0.0};
    double n_bar{0.0};
    double gamma_rate{0.0};  // s^-1
    double tau_d{0.0};       // s
};

/// gamma = gamma0 w n_bar r^2/(1+r^2), r = Lambda/w, tau_D = dX^2 / (gamma lambda_dB^2).
[[nodiscard]] DecoherenceEstimate decoherence_time(const DecoherenceInputs& in);

/// What the `rates` axis of a decoherence grid denotes: the diffusion
/// (decoherence) rate gamma itself, or the bare coupling gamma0.
enum class RateAxis { diffusion, coupling };

struct DecoherenceGridSpec {
    std::vector<double> rates{1e6, 1e7, 1e8};
    std::vector<double> frequencies{1e8, 1e9, 1e10, 1e11, 1e12};
    RateAxis axis{RateAxis::diffusion};
    double mass{6.49e-26};                 // K+ ion, kg
    double temperature{310.0};             // K
    double cutoff{1e13};                   // Lambda, s^-1
    std::optional<double> dispersion;      // Delta X in m; thermal wavelength when unset
};

struct DecoherenceGridPoint {
    double rate{0.0};
    DecoherenceEstimate estimate;
};

/// Rows in rate-major order.
[[nodiscard]] std::vector<DecoherenceGridPoint> decoherence_grid(const DecoherenceGridSpec& spec);

}  // namespace sbnoise
