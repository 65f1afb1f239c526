#include "sbnoise/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sbnoise {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

bool DensityMatrix2::is_finite() const {
    return finite(rho00) && finite(rho01) && finite(rho10) && finite(rho11);
}

DensityMatrix2 DensityMatrix2::from_pure(cplx amp0, cplx amp1) {
    return {amp0 * std::conj(amp0), amp0 * std::conj(amp1), amp1 * std::conj(amp0), amp1 * std::conj(amp1)};
}

DensityMatrix2 DensityMatrix2::diagonal(double p0, double p1) { return {p0, 0.0, 0.0, p1}; }

DensityMatrix2& DensityMatrix2::operator+=(const DensityMatrix2& o) {
    rho00 += o.rho00;
    rho01 += o.rho01;
    rho10 += o.rho10;
    rho11 += o.rho11;
    return *this;
}

DensityMatrix2& DensityMatrix2::operator-=(const DensityMatrix2& o) {
    rho00 -= o.rho00;
    rho01 -= o.rho01;
    rho10 -= o.rho10;
    rho11 -= o.rho11;
    return *this;
}

DensityMatrix2& DensityMatrix2::operator*=(double s) {
    rho00 *= s;
    rho01 *= s;
    rho10 *= s;
    rho11 *= s;
    return *this;
}

DensityMatrix2& DensityMatrix2::operator*=(cplx s) {
    rho00 *= s;
    rho01 *= s;
    rho10 *= s;
    rho11 *= s;
    return *this;
}

double purity(const DensityMatrix2& rho) {
    return std::norm(rho.rho00) + std::norm(rho.rho11) + 2.0 * (rho.rho01 * rho.rho10).real();
}

double max_abs_diff(const DensityMatrix2& a, const DensityMatrix2& b) {
    return std::max({std::abs(a.rho00 - b.rho00), std::abs(a.rho01 - b.rho01), std::abs(a.rho10 - b.rho10),
                     std::abs(a.rho11 - b.rho11)});
}

DensityMatrix2 initial_superposition() { return {0.5, 0.5, 0.5, 0.5}; }

void SystemParams::validate() const {
    require(std::isfinite(omega0), "system.omega0 must be finite");
    require(std::isfinite(delta0) && delta0 >= 0.0, "system.delta0 must be finite and >= 0");
}

void EnvironmentParams::validate() const {
    require(std::isfinite(mass_scale) && mass_scale > 0.0, "environment.mass_scale must be > 0");
    require(std::isfinite(gamma0) && gamma0 >= 0.0, "environment.gamma0 must be >= 0");
    require(std::isfinite(omega_c) && omega_c > 0.0, "environment.omega_c must be > 0");
    require(std::isfinite(kbt) && kbt > 0.0, "environment.kbt must be > 0");
}

void NoiseParams::validate() const {
    require(std::isfinite(alpha) && alpha >= 0.0, "noise.alpha must be finite and >= 0");
}

StepDiagnostics diagnose(const DensityMatrix2& rho) {
    return {rho.trace_defect(), rho.hermiticity_defect(), purity(rho)};
}

void Trajectory::push_back(double t, const DensityMatrix2& rho) {
    times.push_back(t);
    states.push_back(rho);
    diagnostics.push_back(diagnose(rho));
}

void Trajectory::check_invariants() const {
    require(states.size() == times.size() && diagnostics.size() == times.size(),
            "trajectory columns have different lengths");
    for (std::size_t i = 1; i < times.size(); ++i) {
        require(times[i] > times[i - 1], "trajectory times must be strictly increasing");
    }
}

bool same_grid(const Trajectory& a, const Trajectory& b) { return a.times == b.times; }

double kelvin_to_thermal_freq(double kelvin) {
    require(std::isfinite(kelvin) && kelvin > 0.0, "temperature must be a positive number of kelvin");
    return kelvin * units::kb_over_hbar;
}

}  // namespace sbnoise
