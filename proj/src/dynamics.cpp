#include "sbnoise/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace sbnoise {

namespace {

constexpr cplx I{0.0, 1.0};

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

// Largest scaled error component of an embedded step.
double error_norm(const DensityMatrix2& err, const DensityMatrix2& y0, const DensityMatrix2& y1, double rel,
                  double abs) {
    const std::array<cplx, 4> e{err.rho00, err.rho01, err.rho10, err.rho11};
    const std::array<cplx, 4> a{y0.rho00, y0.rho01, y0.rho10, y0.rho11};
    const std::array<cplx, 4> b{y1.rho00, y1.rho01, y1.rho10, y1.rho11};
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double scale = abs + rel * std::max(std::abs(a[i]), std::abs(b[i]));
        worst = std::max(worst, std::abs(e[i]) / scale);
    }
    return worst;
}

DensityMatrix2 rk4_step(const Rhs& f, const DensityMatrix2& y, double h) {
    const DensityMatrix2 k1 = f(y);
    const DensityMatrix2 k2 = f(y + (0.5 * h) * k1);
    const DensityMatrix2 k3 = f(y + (0.5 * h) * k2);
    const DensityMatrix2 k4 = f(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct EmbeddedStep {
    DensityMatrix2 y;
    DensityMatrix2 err;
};

// Dormand-Prince 5(4); the 5th-order solution is propagated.
EmbeddedStep dopri_step(const Rhs& f, const DensityMatrix2& y, double h) {
    constexpr double a21 = 1.0 / 5.0;
    constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                     a54 = -212.0 / 729.0;
    constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                     a65 = -5103.0 / 18656.0;
    constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                     b6 = 11.0 / 84.0;
    constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                     e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    const DensityMatrix2 k1 = f(y);
    const DensityMatrix2 k2 = f(y + h * (a21 * k1));
    const DensityMatrix2 k3 = f(y + h * (a31 * k1 + a32 * k2));
    const DensityMatrix2 k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const DensityMatrix2 k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const DensityMatrix2 k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const DensityMatrix2 y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const DensityMatrix2 k7 = f(y5);
    const DensityMatrix2 err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return {y5, err};
}

void renormalize(DensityMatrix2& rho) {
    const double tr = rho.trace().real();
    if (tr != 0.0 && std::isfinite(tr)) rho *= 1.0 / tr;
}

[[noreturn]] void abort_integration(const std::string& why, double t, Trajectory&& partial) {
    std::ostringstream os;
    os.precision(17);
    os << why << " (last valid time " << t << " s)";
    throw IntegrationError(os.str(), t, std::move(partial));
}

Trajectory integrate_fixed(const Rhs& rhs, const DensityMatrix2& rho0, const IntegratorSpec& spec) {
    Trajectory traj;
    traj.push_back(0.0, rho0);
    if (spec.t_end == 0.0) return traj;

    const auto steps = static_cast<std::size_t>(std::ceil(spec.t_end / spec.dt * (1.0 - 1e-12)));
    const double h = spec.t_end / static_cast<double>(steps);
    DensityMatrix2 rho = rho0;
    for (std::size_t k = 1; k <= steps; ++k) {
        DensityMatrix2 next = rk4_step(rhs, rho, h);
        if (spec.renormalize_trace) renormalize(next);
        const double t_prev = static_cast<double>(k - 1) * h;
        if (!next.is_finite()) abort_integration("non-finite state", t_prev, std::move(traj));
        rho = next;
        if (k == steps) {
            traj.push_back(spec.t_end, rho);
        } else if (k % spec.store_stride == 0) {
            traj.push_back(static_cast<double>(k) * h, rho);
        }
    }
    return traj;
}

Trajectory integrate_adaptive(const Rhs& rhs, const DensityMatrix2& rho0, const IntegratorSpec& spec) {
    Trajectory traj;
    traj.push_back(0.0, rho0);
    if (spec.t_end == 0.0) return traj;

    const double h_min = 1e-14 * spec.t_end;
    double t = 0.0;
    double h = std::min(spec.dt, spec.t_end);
    DensityMatrix2 rho = rho0;
    std::size_t accepted = 0;
    while (t < spec.t_end) {
        const bool last = t + h >= spec.t_end;
        const double step = last ? spec.t_end - t : h;
        auto [next, err] = dopri_step(rhs, rho, step);
        const double norm = error_norm(err, rho, next, spec.rel_tol, spec.abs_tol);
        if (!std::isfinite(norm) || !next.is_finite()) {
            h *= 0.2;
            if (h < h_min) abort_integration("non-finite state", t, std::move(traj));
            continue;
        }
        if (norm <= 1.0) {
            if (spec.renormalize_trace) renormalize(next);
            rho = next;
            t = last ? spec.t_end : t + step;
            ++accepted;
            if (last || accepted % spec.store_stride == 0) traj.push_back(t, rho);
        }
        const double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
        h = step * factor;
        if (h < h_min && t < spec.t_end) abort_integration("step size underflow", t, std::move(traj));
    }
    return traj;
}

}  // namespace

std::string to_string(SpinBosonMode mode) { return mode == SpinBosonMode::verbatim ? "verbatim" : "hermitian"; }

SpinBosonMode parse_spin_boson_mode(const std::string& text) {
    if (text == "verbatim") return SpinBosonMode::verbatim;
    if (text == "hermitian") return SpinBosonMode::hermitian;
    throw ConfigError("unknown spin-boson mode '" + text + "' (expected verbatim|hermitian)");
}

std::string to_string(IntegratorMethod method) { return method == IntegratorMethod::rk4 ? "rk4" : "dopri45"; }

IntegratorMethod parse_integrator_method(const std::string& text) {
    if (text == "rk4") return IntegratorMethod::rk4;
    if (text == "dopri45") return IntegratorMethod::dopri45;
    throw ConfigError("unknown integrator method '" + text + "' (expected rk4|dopri45)");
}

DensityMatrix2 rhs_spin_boson(const DensityMatrix2& rho, const SystemParams& sys, const CoefficientSet& co,
                              SpinBosonMode mode) {
    const double hop = 0.5 * sys.delta0;
    const double w0 = sys.omega0;
    const double D = co.D();
    const double f = co.f();
    const double g = co.gamma();
    const cplx zeta_conj = std::conj(co.zeta());

    DensityMatrix2 d;
    d.rho00 = I * hop * (rho.rho10 - rho.rho01) + 2.0 * g * rho.rho01;
    d.rho11 = I * hop * (rho.rho01 - rho.rho10) + 2.0 * g * rho.rho10;
    if (mode == SpinBosonMode::verbatim) {
        d.rho01 = I * hop * (rho.rho11 - rho.rho00) + 2.0 * I * zeta_conj * rho.rho11 - 2.0 * I * f * rho.rho00 -
                  (I * w0 - 4.0 * D) * rho.rho01;
        d.rho10 = I * hop * (rho.rho00 - rho.rho11) + 2.0 * I * zeta_conj * rho.rho00 - 2.0 * I * f * rho.rho11 +
                  (I * w0 - 4.0 * D) * rho.rho10;
    } else {
        d.rho01 = I * hop * (rho.rho11 - rho.rho00) + 2.0 * I * zeta_conj * rho.rho11 - 2.0 * I * f * rho.rho00 -
                  (I * w0 + 4.0 * D) * rho.rho01;
        d.rho10 = std::conj(d.rho01);
    }
    return d;
}

DensityMatrix2 rhs_classical_noise(const DensityMatrix2& rho, const SystemParams& sys, const NoiseParams& noise) {
    const double hop = 0.5 * sys.delta0;
    const double w0 = sys.omega0;
    const double a = noise.alpha;

    DensityMatrix2 d;
    d.rho00 = I * hop * (rho.rho10 - rho.rho01);
    d.rho01 = I * hop * (rho.rho11 - rho.rho00) - I * w0 * rho.rho01 - 2.0 * a * rho.rho01;
    d.rho10 = I * hop * (rho.rho00 - rho.rho11) + I * w0 * rho.rho10 - 2.0 * a * rho.rho10;
    d.rho11 = I * hop * (rho.rho01 - rho.rho10);
    return d;
}

void IntegratorSpec::validate() const {
    require(std::isfinite(dt) && dt > 0.0, "integrator.dt must be > 0");
    require(std::isfinite(t_end) && t_end >= 0.0, "integrator.t_end must be >= 0");
    require(store_stride >= 1, "integrator.store_stride must be >= 1");
    if (method == IntegratorMethod::dopri45) {
        require(rel_tol > 0.0 && abs_tol > 0.0, "adaptive integrator tolerances must be > 0");
    }
}

void IntegratorSpec::check_resolves(double rate) const {
    if (method != IntegratorMethod::rk4) return;
    const double limit = 0.05 / std::max(rate, 1.0);
    if (dt > limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "integrator.dt = " << dt << " s does not resolve the fastest rate " << rate << " s^-1 (need dt <= "
           << limit << ")";
        throw ConfigError(os.str());
    }
}

double fastest_rate(const SystemParams& sys, const CoefficientSet& co, const NoiseParams& noise) {
    return std::max({std::abs(sys.omega0), sys.delta0, 4.0 * std::abs(co.D()), 2.0 * noise.alpha});
}

Trajectory integrate(const Rhs& rhs, const DensityMatrix2& rho0, const IntegratorSpec& spec) {
    spec.validate();
    require(rho0.is_finite(), "initial state must be finite");
    return spec.method == IntegratorMethod::rk4 ? integrate_fixed(rhs, rho0, spec)
                                                : integrate_adaptive(rhs, rho0, spec);
}

Trajectory evolve_spin_boson(const SystemParams& sys, const CoefficientSet& co, SpinBosonMode mode,
                             const DensityMatrix2& rho0, const IntegratorSpec& spec) {
    sys.validate();
    spec.validate();
    spec.check_resolves(fastest_rate(sys, co, {}));
    return integrate([&](const DensityMatrix2& r) { return rhs_spin_boson(r, sys, co, mode); }, rho0, spec);
}

Trajectory evolve_classical_noise(const SystemParams& sys, const NoiseParams& noise, const DensityMatrix2& rho0,
                                  const IntegratorSpec& spec) {
    sys.validate();
    noise.validate();
    spec.validate();
    spec.check_resolves(fastest_rate(sys, {}, noise));
    return integrate([&](const DensityMatrix2& r) { return rhs_classical_noise(r, sys, noise); }, rho0, spec);
}

}  // namespace sbnoise
