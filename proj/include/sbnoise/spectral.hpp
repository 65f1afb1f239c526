// spectral.hpp - Lorentz-Drude spectral density, bath kernels and the
// master-equation coefficients D, f, gamma.

#pragma once

#include <optional>
#include <string>

#include "sbnoise/core.hpp"
#include "sbnoise/quadrature.hpp"

namespace sbnoise {

enum class QuadratureScheme { fixed_panel, adaptive };

/// Truncation and resolution of the semi-infinite frequency and lag integrals.
struct QuadratureSpec {
    double max_frequency{0.0};  // upper limit of omega integrals
    double max_lag{0.0};        // upper limit of tau integrals
    std::size_t panel_count{64};
    QuadratureScheme scheme{QuadratureScheme::fixed_panel};
    double rel_tol{1e-3};  // relative to the integral of |integrand|

    /// Checks panel_count >= 64, positive limits and max_frequency >= 10 omega_c.
    void validate(const EnvironmentParams& env) const;
};

/// max_frequency = 200 max(omega_c, delta0, kbt), max_lag = 200 / min(omega_c, delta0).
[[nodiscard]] QuadratureSpec default_quadrature(const EnvironmentParams& env, double delta0);

/// Non-convergence of a quadrature; the message names each failing integral
/// with its value and error estimate.
struct QuadratureError : NumericalError {
    explicit QuadratureError(const std::string& what) : NumericalError(what) {}
};

/// coth(x) via expm1 so that small arguments keep full relative precision.
[[nodiscard]] double coth_stable(double x);

/// J(w) = (2 M gamma0 / pi) w wc^2 / (wc^2 + w^2); odd in w.
[[nodiscard]] double spectral_density(double omega, const EnvironmentParams& env);

/// J(w) coth(w / 2kT), continued to its finite limit 4 M gamma0 kT / pi at w = 0.
[[nodiscard]] double thermal_spectral_density(double omega, const EnvironmentParams& env);

/// Noise kernel nu(tau) = int_0^W J(w) coth(w/2kT) cos(w tau) dw.
[[nodiscard]] quad::Estimate noise_kernel(double tau, const EnvironmentParams& env, const QuadratureSpec& spec);

/// Dissipation kernel eta(tau) = int_0^W J(w) sin(w tau) dw.
[[nodiscard]] quad::Estimate dissipation_kernel(double tau, const EnvironmentParams& env,
                                                const QuadratureSpec& spec);

/// gamma = (pi/2) J(delta0).
[[nodiscard]] double coeff_gamma_closed(const EnvironmentParams& env, double delta0);

/// D = (pi/2) J(delta0) coth(delta0 / 2kT); delta0 must be > 0.
[[nodiscard]] double coeff_D_closed(const EnvironmentParams& env, double delta0);

/// High-temperature f = 2 M gamma0 kT wc delta0 / (delta0^2 + wc^2).
[[nodiscard]] double coeff_f_highT(const EnvironmentParams& env, double delta0);

/// Message describing why the high-temperature form of f is questionable
/// (delta0/kT or wc/kT above 0.1), or nullopt when it is within range.
[[nodiscard]] std::optional<std::string> high_temperature_warning(const EnvironmentParams& env, double delta0);

/// Closed-form set {D, f_highT, gamma}.
[[nodiscard]] CoefficientSet coeff_closed(const EnvironmentParams& env, double delta0);

struct NumericCoefficients {
    CoefficientSet coefficients;
    double D_error{0.0};
    double f_error{0.0};
    double gamma_error{0.0};
};

/// D, f, gamma as nested quadratures of the kernels against cos/sin(delta0 tau)
/// over [0, max_lag]. Throws QuadratureError naming every coefficient whose
/// error estimate exceeds rel_tol times the integral of |integrand|.
[[nodiscard]] NumericCoefficients coeff_numeric(const EnvironmentParams& env, double delta0,
                                                const QuadratureSpec& spec);

}  // namespace sbnoise
