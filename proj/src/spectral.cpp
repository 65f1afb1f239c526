#include "sbnoise/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace sbnoise {

namespace {

using std::numbers::pi;

// Upper bound on omega-nodes x tau-nodes for the nested coefficient quadrature.
constexpr double kMaxNestedEvaluations = 4e9;

std::size_t panels_for(double length, double max_width, std::size_t minimum) {
    const double n = std::ceil(length / max_width);
    if (!std::isfinite(n) || n > 1e8) throw QuadratureError("quadrature grid too large for the requested range");
    return std::max(minimum, static_cast<std::size_t>(std::max(n, 1.0)));
}

std::vector<double> frequency_edges(double tau, const QuadratureSpec& spec) {
    const double width = tau > 0.0 ? pi / tau : spec.max_frequency;
    return quad::uniform_edges(0.0, spec.max_frequency, panels_for(spec.max_frequency, width, spec.panel_count));
}

// Half-period panels of cos/sin(delta0 tau) on [0, max_lag], with the first
// panel graded geometrically towards tau = 0 where the kernels vary on the
// 1/max_frequency scale.
std::vector<double> lag_edges(double delta0, const QuadratureSpec& spec) {
    const double half_period = pi / delta0;
    std::vector<double> edges =
        quad::uniform_edges(0.0, spec.max_lag, panels_for(spec.max_lag, half_period, spec.panel_count));
    const double finest = 0.1 / spec.max_frequency;
    std::vector<double> graded;
    for (double e = edges[1] * 0.5; e > finest; e *= 0.5) graded.push_back(e);
    edges.insert(edges.begin() + 1, graded.rbegin(), graded.rend());
    return edges;
}

quad::Estimate kernel_integral(const std::function<double(double)>& integrand, double tau,
                               const QuadratureSpec& spec) {
    const auto edges = frequency_edges(tau, spec);
    if (spec.scheme == QuadratureScheme::adaptive) {
        return quad::integrate_adaptive(integrand, edges, spec.rel_tol, 0.0, 64 * edges.size());
    }
    return quad::integrate_panels(integrand, edges);
}

bool converged(const quad::Estimate& e, double rel_tol) { return e.error <= rel_tol * e.abs_value; }

void check_converged(const quad::Estimate& e, double rel_tol, const char* name, double tau) {
    if (converged(e, rel_tol)) return;
    std::ostringstream os;
    os.precision(6);
    os << name << "(tau=" << tau << ") did not converge: value " << e.value << ", error estimate " << e.error
       << " > " << rel_tol << " x " << e.abs_value;
    throw QuadratureError(os.str());
}

}  // namespace

void QuadratureSpec::validate(const EnvironmentParams& env) const {
    if (!(std::isfinite(max_frequency) && max_frequency > 0.0)) throw ConfigError("quadrature.max_frequency must be > 0");
    if (!(std::isfinite(max_lag) && max_lag > 0.0)) throw ConfigError("quadrature.max_lag must be > 0");
    if (panel_count < 64) throw ConfigError("quadrature.panel_count must be >= 64");
    if (!(rel_tol > 0.0)) throw ConfigError("quadrature.rel_tol must be > 0");
    if (max_frequency < 10.0 * env.omega_c) throw ConfigError("quadrature.max_frequency must be >= 10 omega_c");
}

QuadratureSpec default_quadrature(const EnvironmentParams& env, double delta0) {
    QuadratureSpec spec;
    spec.max_frequency = 200.0 * std::max({env.omega_c, delta0, env.kbt});
    spec.max_lag = 200.0 / (delta0 > 0.0 ? std::min(env.omega_c, delta0) : env.omega_c);
    return spec;
}

double coth_stable(double x) {
    if (x < 0.0) return -coth_stable(-x);
    if (x == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 + 2.0 / std::expm1(2.0 * x);
}

double spectral_density(double omega, const EnvironmentParams& env) {
    const double wc2 = env.omega_c * env.omega_c;
    return 2.0 * env.mass_scale * env.gamma0 / pi * omega * wc2 / (wc2 + omega * omega);
}

double thermal_spectral_density(double omega, const EnvironmentParams& env) {
    if (omega == 0.0) return 4.0 * env.mass_scale * env.gamma0 * env.kbt / pi;
    return spectral_density(omega, env) * coth_stable(omega / (2.0 * env.kbt));
}

quad::Estimate noise_kernel(double tau, const EnvironmentParams& env, const QuadratureSpec& spec) {
    env.validate();
    spec.validate(env);
    if (!(tau >= 0.0)) throw ConfigError("noise_kernel requires tau >= 0");
    auto integrand = [&](double w) { return thermal_spectral_density(w, env) * std::cos(w * tau); };
    const auto e = kernel_integral(integrand, tau, spec);
    check_converged(e, spec.rel_tol, "noise kernel", tau);
    return e;
}

quad::Estimate dissipation_kernel(double tau, const EnvironmentParams& env, const QuadratureSpec& spec) {
    env.validate();
    spec.validate(env);
    if (!(tau >= 0.0)) throw ConfigError("dissipation_kernel requires tau >= 0");
    if (tau == 0.0) return {};
    auto integrand = [&](double w) { return spectral_density(w, env) * std::sin(w * tau); };
    const auto e = kernel_integral(integrand, tau, spec);
    check_converged(e, spec.rel_tol, "dissipation kernel", tau);
    return e;
}

double coeff_gamma_closed(const EnvironmentParams& env, double delta0) {
    if (!(delta0 >= 0.0)) throw ConfigError("delta0 must be >= 0");
    const double wc2 = env.omega_c * env.omega_c;
    return env.mass_scale * env.gamma0 * delta0 * wc2 / (wc2 + delta0 * delta0);
}

double coeff_D_closed(const EnvironmentParams& env, double delta0) {
    if (!(delta0 > 0.0)) {
        throw ConfigError("D diverges as coth(delta0/2kT) at delta0 = 0; use the 2 M gamma0 kT limit explicitly");
    }
    return coeff_gamma_closed(env, delta0) * coth_stable(delta0 / (2.0 * env.kbt));
}

double coeff_f_highT(const EnvironmentParams& env, double delta0) {
    if (!(delta0 >= 0.0)) throw ConfigError("delta0 must be >= 0");
    return 2.0 * env.mass_scale * env.gamma0 * env.kbt * env.omega_c * delta0 /
           (delta0 * delta0 + env.omega_c * env.omega_c);
}

std::optional<std::string> high_temperature_warning(const EnvironmentParams& env, double delta0) {
    const double r_delta = delta0 / env.kbt;
    const double r_cut = env.omega_c / env.kbt;
    if (r_delta <= 0.1 && r_cut <= 0.1) return std::nullopt;
    std::ostringstream os;
    os << "high-temperature f assumes delta0/kT and omega_c/kT << 1 (got " << r_delta << ", " << r_cut << ")";
    return os.str();
}

CoefficientSet coeff_closed(const EnvironmentParams& env, double delta0) {
    env.validate();
    return {coeff_D_closed(env, delta0), coeff_f_highT(env, delta0), coeff_gamma_closed(env, delta0)};
}

NumericCoefficients coeff_numeric(const EnvironmentParams& env, double delta0, const QuadratureSpec& spec) {
    env.validate();
    spec.validate(env);
    if (!(delta0 > 0.0)) throw ConfigError("numeric coefficients require delta0 > 0");

    // Frequency grid fine enough for cos(w tau) at the largest lag; the bath
    // functions are tabulated once and reused for every lag node.
    const auto w_edges = frequency_edges(spec.max_lag, spec);
    const auto w_rule = quad::composite_rule(w_edges);
    const auto t_edges = lag_edges(delta0, spec);
    const auto t_rule = quad::composite_rule(t_edges);
    if (static_cast<double>(w_rule.size()) * static_cast<double>(t_rule.size()) > kMaxNestedEvaluations) {
        throw QuadratureError("nested coefficient quadrature exceeds the evaluation budget; reduce "
                              "quadrature.max_frequency x quadrature.max_lag");
    }

    const std::size_t nw = w_rule.size();
    std::vector<double> nu_k(nw), nu_g(nw), eta_k(nw), eta_g(nw);
    for (std::size_t i = 0; i < nw; ++i) {
        const double w = w_rule.nodes[i];
        const double g = thermal_spectral_density(w, env);
        const double j = spectral_density(w, env);
        nu_k[i] = w_rule.kronrod[i] * g;
        nu_g[i] = w_rule.gauss[i] * g;
        eta_k[i] = w_rule.kronrod[i] * j;
        eta_g[i] = w_rule.gauss[i] * j;
    }

    struct Kernels {
        double nu, nu_err, eta, eta_err;
    };
    auto kernels_at = [&](double tau) {
        double nk = 0.0, ng = 0.0, ek = 0.0, eg = 0.0;
        for (std::size_t i = 0; i < nw; ++i) {
            const double c = std::cos(w_rule.nodes[i] * tau);
            const double s = std::sin(w_rule.nodes[i] * tau);
            nk += nu_k[i] * c;
            ng += nu_g[i] * c;
            ek += eta_k[i] * s;
            eg += eta_g[i] * s;
        }
        return Kernels{nk, std::abs(nk - ng), ek, std::abs(ek - eg)};
    };

    quad::Estimate D, f, gamma;
    if (spec.scheme == QuadratureScheme::fixed_panel) {
        const std::size_t nt = t_rule.size();
        std::vector<double> d_vals(nt), f_vals(nt), g_vals(nt);
        double d_inner = 0.0, f_inner = 0.0, g_inner = 0.0;
        for (std::size_t i = 0; i < nt; ++i) {
            const double tau = t_rule.nodes[i];
            const auto k = kernels_at(tau);
            const double c = std::cos(delta0 * tau);
            const double s = std::sin(delta0 * tau);
            d_vals[i] = k.nu * c;
            f_vals[i] = k.nu * s;
            g_vals[i] = k.eta * s;
            d_inner += t_rule.kronrod[i] * k.nu_err * std::abs(c);
            f_inner += t_rule.kronrod[i] * k.nu_err * std::abs(s);
            g_inner += t_rule.kronrod[i] * k.eta_err * std::abs(s);
        }
        D = quad::apply(t_rule, d_vals);
        f = quad::apply(t_rule, f_vals);
        gamma = quad::apply(t_rule, g_vals);
        D.error += d_inner;
        f.error += f_inner;
        gamma.error += g_inner;
    } else {
        const std::size_t max_panels = 4 * (t_edges.size() - 1);
        auto run = [&](auto&& integrand) {
            return quad::integrate_adaptive(integrand, t_edges, spec.rel_tol, 0.0, max_panels);
        };
        D = run([&](double tau) { return kernels_at(tau).nu * std::cos(delta0 * tau); });
        f = run([&](double tau) { return kernels_at(tau).nu * std::sin(delta0 * tau); });
        gamma = run([&](double tau) { return kernels_at(tau).eta * std::sin(delta0 * tau); });
    }

    std::ostringstream failures;
    failures.precision(6);
    auto note = [&](const char* name, const quad::Estimate& e) {
        if (!converged(e, spec.rel_tol)) {
            failures << ' ' << name << " = " << e.value << " (error estimate " << e.error << ");";
        }
    };
    note("D", D);
    note("f", f);
    note("gamma", gamma);
    if (!failures.str().empty()) throw QuadratureError("coefficient quadrature did not converge:" + failures.str());

    return {CoefficientSet(D.value, f.value, gamma.value), D.error, f.error, gamma.error};
}

}  // namespace sbnoise
