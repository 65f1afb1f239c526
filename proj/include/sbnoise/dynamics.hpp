// dynamics.hpp - equations of motion of both models in the sigma_z basis and
// the deterministic integrators.

#pragma once

#include <functional>
#include <string>

#include "sbnoise/core.hpp"

namespace sbnoise {

/// How the spin-boson coherence rows are read.
///   verbatim:  the four element equations exactly as published; rho01 is
///              multiplied by -(i w0 - 4D), so it grows while rho10 decays.
///   hermitian: rho01 is damped by -(i w0 + 4D) and d rho10 = conj(d rho01).
enum class SpinBosonMode { verbatim, hermitian };

[[nodiscard]] std::string to_string(SpinBosonMode mode);
[[nodiscard]] SpinBosonMode parse_spin_boson_mode(const std::string& text);

using Rhs = std::function<DensityMatrix2(const DensityMatrix2&)>;

[[nodiscard]] DensityMatrix2 rhs_spin_boson(const DensityMatrix2& rho, const SystemParams& sys,
                                            const CoefficientSet& co, SpinBosonMode mode);

[[nodiscard]] DensityMatrix2 rhs_classical_noise(const DensityMatrix2& rho, const SystemParams& sys,
                                                 const NoiseParams& noise);

enum class IntegratorMethod { rk4, dopri45 };

[[nodiscard]] std::string to_string(IntegratorMethod method);
[[nodiscard]] IntegratorMethod parse_integrator_method(const std::string& text);

struct IntegratorSpec {
    IntegratorMethod method{IntegratorMethod::rk4};
    double dt{1e-10};  // fixed step, or the initial step of the adaptive method
    double rel_tol{1e-10};
    double abs_tol{1e-12};
    double t_end{0.0};
    std::size_t store_stride{1};
    bool renormalize_trace{false};  // divide by Re(trace) after every step

    void validate() const;
    /// Fixed-step resolution rule dt <= 0.05 / max(rate, 1).
    void check_resolves(double fastest_rate) const;
};

/// Fastest rate of either model: max(|w0|, delta0, 4D, 2 alpha).
[[nodiscard]] double fastest_rate(const SystemParams& sys, const CoefficientSet& co, const NoiseParams& noise);

/// Integration aborted (non-finite state or adaptive step underflow). Carries
/// the trajectory up to the last valid time.
struct IntegrationError : NumericalError {
    IntegrationError(const std::string& what, double last_valid_time, Trajectory partial)
        : NumericalError(what), last_valid_time(last_valid_time), partial(std::move(partial)) {}

    double last_valid_time;
    Trajectory partial;
};

/// Integrates d rho/dt = rhs(rho) from t = 0 to spec.t_end. States are stored
/// at t = 0, every store_stride steps, and at t_end.
[[nodiscard]] Trajectory integrate(const Rhs& rhs, const DensityMatrix2& rho0, const IntegratorSpec& spec);

/// Model-level helpers that also enforce the step-resolution rule.
[[nodiscard]] Trajectory evolve_spin_boson(const SystemParams& sys, const CoefficientSet& co, SpinBosonMode mode,
                                           const DensityMatrix2& rho0, const IntegratorSpec& spec);
[[nodiscard]] Trajectory evolve_classical_noise(const SystemParams& sys, const NoiseParams& noise,
                                                const DensityMatrix2& rho0, const IntegratorSpec& spec);

}  // namespace sbnoise
