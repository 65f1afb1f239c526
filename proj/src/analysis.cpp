#include "sbnoise/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "sbnoise/spectral.hpp"

namespace sbnoise {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

DeltaRSeries delta_r(const Trajectory& traj_sb, const Trajectory& traj_noise, std::optional<TimeWindow> window) {
    require(same_grid(traj_sb, traj_noise), "delta R needs both trajectories on the same time grid");
    DeltaRSeries out;
    out.times = traj_sb.times;
    out.values.reserve(out.times.size());
    for (std::size_t i = 0; i < out.times.size(); ++i) {
        out.values.push_back(traj_sb.states[i].rho01.real() - traj_noise.states[i].rho01.real());
    }
    if (out.times.empty()) return out;
    out.window = window.value_or(TimeWindow{out.times.front(), out.times.back()});

    double integral = 0.0;
    std::optional<std::size_t> first;
    std::size_t last = 0;
    for (std::size_t i = 0; i < out.times.size(); ++i) {
        const double t = out.times[i];
        if (t < out.window.start || t > out.window.end) continue;
        out.max_abs = std::max(out.max_abs, std::abs(out.values[i]));
        if (first && i == last + 1) {
            integral += 0.5 * (out.times[i] - out.times[last]) * (std::abs(out.values[i]) + std::abs(out.values[last]));
        }
        if (!first) first = i;
        last = i;
    }
    if (first) {
        const double span = out.times[last] - out.times[*first];
        out.time_mean_abs = span > 0.0 ? integral / span : std::abs(out.values[*first]);
    }
    return out;
}

void ComparisonConfig::validate() const {
    require(coefficients.has_value() != environment.has_value(),
            "exactly one of an explicit coefficient set or an environment must be given");
    if (environment) environment->validate();
    noise.validate();
    integrator.validate();
    require(window.end >= window.start, "summary window must satisfy start <= end");
}

CoefficientSet ComparisonConfig::coefficients_at(double delta0) const {
    if (coefficients) return *coefficients;
    return coeff_closed(*environment, delta0);
}

Comparison compare_models(double delta0, const ComparisonConfig& config) {
    config.validate();
    Comparison out;
    out.delta0 = delta0;
    out.coefficients = config.coefficients_at(delta0);
    const SystemParams sys{config.omega0, delta0};
    const DensityMatrix2 rho0 = initial_superposition();
    out.spin_boson = evolve_spin_boson(sys, out.coefficients, config.mode, rho0, config.integrator);
    out.noise = evolve_classical_noise(sys, config.noise, rho0, config.integrator);
    out.delta = delta_r(out.spin_boson, out.noise, config.window);
    return out;
}

std::vector<SweepRow> sweep_hopping(const std::vector<double>& rates, const ComparisonConfig& config,
                                    unsigned workers) {
    require(!rates.empty(), "sweep needs at least one hopping rate");
    for (double r : rates) require(std::isfinite(r) && r > 0.0, "hopping rates must be > 0");
    config.validate();

    auto point = [&config](double rate) {
        Comparison c = compare_models(rate, config);
        return SweepRow{rate, c.delta.max_abs, c.delta.time_mean_abs, std::move(c.delta)};
    };

    std::vector<SweepRow> rows(rates.size());
    workers = std::max(1u, workers);
    for (std::size_t first = 0; first < rates.size(); first += workers) {
        std::vector<std::future<SweepRow>> pending;
        const std::size_t last = std::min(rates.size(), first + workers);
        for (std::size_t i = first; i < last; ++i) {
            pending.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, point, rates[i]));
        }
        for (std::size_t i = first; i < last; ++i) rows[i] = pending[i - first].get();
    }
    return rows;
}

std::vector<double> default_sweep_rates() { return {1e6, 5e6, 1e7, 5e7, 1e8}; }

double thermal_de_broglie(double mass_kg, double kbt_joule) {
    require(std::isfinite(mass_kg) && mass_kg > 0.0, "mass must be > 0");
    require(std::isfinite(kbt_joule) && kbt_joule > 0.0, "thermal energy must be > 0");
    return units::hbar / std::sqrt(2.0 * mass_kg * kbt_joule);
}

double mean_occupation(double x) {
    require(std::isfinite(x) && x > 0.0, "omega / kT must be > 0");
    return x < 700.0 ? 1.0 / std::expm1(x) : std::exp(-x);
}

DecoherenceEstimate decoherence_time(const DecoherenceInputs& in) {
    for (double v : {in.mass, in.kbt, in.dispersion, in.cutoff, in.frequency, in.gamma0}) {
        require(std::isfinite(v) && v > 0.0, "decoherence estimate inputs must all be > 0");
    }
    DecoherenceEstimate est;
    est.inputs = in;
    est.lambda_db = thermal_de_broglie(in.mass, units::hbar * in.kbt);
    est.r = in.cutoff / in.frequency;
    est.n_bar = mean_occupation(in.frequency / in.kbt);
    const double r2 = est.r * est.r;
    est.gamma_rate = in.gamma0 * in.frequency * est.n_bar * r2 / (1.0 + r2);
    est.tau_d = in.dispersion * in.dispersion / (est.gamma_rate * est.lambda_db * est.lambda_db);
    return est;
}

std::vector<DecoherenceGridPoint> decoherence_grid(const DecoherenceGridSpec& spec) {
    require(!spec.rates.empty() && !spec.frequencies.empty(), "decoherence grid needs rates and frequencies");
    const double kbt = kelvin_to_thermal_freq(spec.temperature);
    require(std::isfinite(spec.mass) && spec.mass > 0.0, "tau.mass must be > 0");
    const double lambda = thermal_de_broglie(spec.mass, units::hbar * kbt);
    const double dispersion = spec.dispersion.value_or(lambda);

    std::vector<DecoherenceGridPoint> out;
    for (double rate : spec.rates) {
        for (double w : spec.frequencies) {
            DecoherenceInputs in{spec.mass, kbt, dispersion, spec.cutoff, w, rate};
            if (spec.axis == RateAxis::diffusion) {
                // Invert gamma = gamma0 w n_bar r^2/(1+r^2) for the coupling.
                require(std::isfinite(w) && w > 0.0 && spec.cutoff > 0.0, "frequencies and cutoff must be > 0");
                const double r2 = (spec.cutoff / w) * (spec.cutoff / w);
                const double per_coupling = w * mean_occupation(w / kbt) * r2 / (1.0 + r2);
                require(per_coupling > 0.0, "thermal occupation underflows at this frequency");
                in.gamma0 = rate / per_coupling;
            }
            out.push_back({rate, decoherence_time(in)});
        }
    }
    return out;
}

}  // namespace sbnoise
