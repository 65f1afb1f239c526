#include "sbnoise/commands.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "sbnoise/io.hpp"

namespace sbnoise::cli {

namespace {

using io::format_double;

void emit(const std::string& path, const std::string& contents, std::ostream& out) {
    if (path.empty()) {
        out << contents;
    } else {
        io::write_file(path, contents);
    }
}

double rel_diff(double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a - b) / std::abs(b); }

std::vector<io::Series> compare_series(const Comparison& c) {
    io::Series sb{"Re rho01 spin-boson", c.spin_boson.times, {}};
    io::Series nz{"Re rho01 noise", c.noise.times, {}};
    for (const auto& s : c.spin_boson.states) sb.y.push_back(s.rho01.real());
    for (const auto& s : c.noise.states) nz.y.push_back(s.rho01.real());
    io::Series dr{"Delta R", c.delta.times, c.delta.values};
    return {sb, nz, dr};
}

std::string rate_label(double rate) {
    std::ostringstream os;
    os.precision(3);
    os << "Delta0 = " << rate << " s^-1";
    return os.str();
}

}  // namespace

RunConfig with_overrides(RunConfig config, const CommandOptions& opts) {
    if (opts.mode) config.mode = *opts.mode;
    if (opts.seed && config.ensemble) config.ensemble->master_seed = *opts.seed;
    if (!opts.out.empty()) config.output.csv = opts.out;
    if (!opts.svg.empty()) config.output.svg = opts.svg;
    return config;
}

int cmd_coeffs(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    if (!config.environment) throw ConfigError("coeffs needs an environment block");
    const EnvironmentParams& env = *config.environment;
    const double delta0 = config.system.delta0;
    const CoefficientSet closed = coeff_closed(env, delta0);
    if (auto warning = high_temperature_warning(env, delta0)) err << "warning: " << *warning << '\n';

    io::CsvTable table;
    if (opts.numeric) {
        const QuadratureSpec quad = config.quadrature.value_or(default_quadrature(env, delta0));
        const NumericCoefficients num = coeff_numeric(env, delta0, quad);
        const CoefficientSet& n = num.coefficients;
        table.header = {"delta0", "D_closed", "f_closed", "gamma_closed", "re_zeta_closed", "im_zeta_closed",
                        "D_numeric", "f_numeric", "gamma_numeric", "re_zeta_numeric", "im_zeta_numeric",
                        "D_error", "f_error", "gamma_error", "D_rel_diff", "f_rel_diff", "gamma_rel_diff"};
        table.rows.push_back({delta0, closed.D(), closed.f(), closed.gamma(), closed.zeta().real(),
                              closed.zeta().imag(), n.D(), n.f(), n.gamma(), n.zeta().real(), n.zeta().imag(),
                              num.D_error, num.f_error, num.gamma_error, rel_diff(n.D(), closed.D()),
                              rel_diff(n.f(), closed.f()), rel_diff(n.gamma(), closed.gamma())});
    } else {
        table.header = {"delta0", "D_closed", "f_closed", "gamma_closed", "re_zeta_closed", "im_zeta_closed"};
        table.rows.push_back(
            {delta0, closed.D(), closed.f(), closed.gamma(), closed.zeta().real(), closed.zeta().imag()});
    }
    emit(config.output.csv, io::to_string(table), out);
    return kOk;
}

int cmd_evolve(const RunConfig& config, const CommandOptions&, std::ostream& out, std::ostream&) {
    if (config.model == Model::both) throw ConfigError("evolve needs model = spin-boson or model = noise");
    const DensityMatrix2 rho0 = initial_superposition();
    try {
        const Trajectory traj = config.model == Model::spin_boson
                                    ? evolve_spin_boson(config.system, config.resolved_coefficients(), config.mode,
                                                        rho0, config.integrator)
                                    : evolve_classical_noise(config.system, config.noise, rho0, config.integrator);
        emit(config.output.csv, io::to_string(io::trajectory_table(traj)), out);
        return kOk;
    } catch (const IntegrationError& e) {
        io::CsvTable table = io::trajectory_table(e.partial);
        table.comments.push_back(std::string("integration aborted: ") + e.what());
        emit(config.output.csv, io::to_string(table), out);
        throw;
    }
}

int cmd_ensemble(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream&) {
    if (!config.ensemble) throw ConfigError("ensemble needs an ensemble block");
    const EnsembleResult res = ensemble_average(config.system, config.noise, *config.ensemble, opts.workers);
    io::CsvTable table = io::trajectory_table(res.mean_trajectory);
    table.header.push_back("stderr_re_rho01");
    table.header.push_back("stderr_im_rho01");
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        table.rows[i].push_back(res.stderr_re_rho01[i]);
        table.rows[i].push_back(res.stderr_im_rho01[i]);
    }
    emit(config.output.csv, io::to_string(table), out);
    return kOk;
}

int cmd_compare(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream&) {
    if (config.model != Model::both) throw ConfigError("compare needs model = both");
    const Comparison c = compare_models(config.system.delta0, config.comparison(opts.derive_coeffs));

    io::CsvTable table;
    table.header = {"t", "re_rho01_sb", "im_rho01_sb", "re_rho01_noise", "im_rho01_noise", "delta_r"};
    for (std::size_t i = 0; i < c.delta.times.size(); ++i) {
        const cplx sb = c.spin_boson.states[i].rho01;
        const cplx nz = c.noise.states[i].rho01;
        table.rows.push_back({c.delta.times[i], sb.real(), sb.imag(), nz.real(), nz.imag(), c.delta.values[i]});
    }
    emit(config.output.csv, io::to_string(table), out);
    if (!config.output.svg.empty()) {
        io::write_file(config.output.svg,
                       io::render_line_chart({"Coherence, " + rate_label(config.system.delta0), "t (s)", "Re rho01"},
                                             compare_series(c)));
    }
    if (!config.output.csv.empty()) {
        out << "delta_r max_abs = " << format_double(c.delta.max_abs)
            << ", time_mean_abs = " << format_double(c.delta.time_mean_abs) << " over [" << c.delta.window.start
            << ", " << c.delta.window.end << "] s\n";
    }
    return kOk;
}

std::string sweep_table_csv(const std::vector<SweepRow>& rows) {
    io::CsvTable table;
    table.header = {"rate", "max_abs_delta_r", "time_mean_abs_delta_r"};
    for (const auto& r : rows) table.rows.push_back({r.rate, r.max_abs, r.time_mean_abs});
    return io::to_string(table);
}

std::string sweep_trend_summary(const std::vector<SweepRow>& rows) {
    std::vector<const SweepRow*> sorted;
    for (const auto& r : rows) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->rate < b->rate; });
    bool monotone = true;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (!(sorted[i]->time_mean_abs < sorted[i - 1]->time_mean_abs)) monotone = false;
    }
    const bool fastest_smallest =
        std::all_of(sorted.begin(), sorted.end(),
                    [&](auto* r) { return r == sorted.back() || sorted.back()->time_mean_abs <= r->time_mean_abs; });
    std::ostringstream os;
    os << "time-mean |Delta R| strictly decreasing with hopping rate: " << (monotone ? "yes" : "no")
       << "; smallest at the highest rate: " << (fastest_smallest ? "yes" : "no");
    return os.str();
}

int cmd_sweep(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream&) {
    const auto rows = sweep_hopping(config.sweep_rates, config.comparison(opts.derive_coeffs), opts.workers);
    emit(config.output.csv, sweep_table_csv(rows), out);
    if (!opts.series.empty()) {
        io::CsvTable series;
        series.header = {"rate", "t", "delta_r"};
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.series.times.size(); ++i) {
                series.rows.push_back({r.rate, r.series.times[i], r.series.values[i]});
            }
        }
        io::write_file(opts.series, io::to_string(series));
    }
    if (!config.output.svg.empty()) {
        std::vector<io::Series> lines;
        for (const auto& r : rows) lines.push_back({rate_label(r.rate), r.series.times, r.series.values});
        io::write_file(config.output.svg, io::render_line_chart({"Delta R versus time", "t (s)", "Delta R"}, lines));
    }
    if (!config.output.csv.empty()) out << sweep_trend_summary(rows) << '\n';
    return kOk;
}

int cmd_tau(const RunConfig& config, const CommandOptions&, std::ostream& out, std::ostream&) {
    if (!config.tau) throw ConfigError("tau needs a tau block with tau.mass and tau.temperature");
    const auto grid = decoherence_grid(*config.tau);
    io::CsvTable table;
    table.header = {"rate", "frequency", "gamma0", "lambda_db", "r", "n_bar", "gamma_rate", "tau_d"};
    double min_tau = INFINITY;
    for (const auto& p : grid) {
        const auto& e = p.estimate;
        table.rows.push_back({p.rate, e.inputs.frequency, e.inputs.gamma0, e.lambda_db, e.r, e.n_bar, e.gamma_rate,
                              e.tau_d});
        min_tau = std::min(min_tau, e.tau_d);
    }
    std::ostringstream summary;
    summary << "minimum tau_D = " << format_double(min_tau) << " s; reference order 1e-7 s; within a factor of 10: "
            << (min_tau >= 1e-8 * (1.0 - 1e-12) ? "yes" : "no");
    table.comments.push_back(summary.str());
    emit(config.output.csv, io::to_string(table), out);
    if (!config.output.csv.empty()) out << summary.str() << '\n';
    return kOk;
}

RunConfig demo_config(const std::string& name) {
    RunConfig c;
    c.model = Model::both;
    c.mode = SpinBosonMode::hermitian;
    c.system.omega0 = 1e7;
    c.coefficients = CoefficientSet(0.5e7, 0.0, 0.5e7);
    c.noise.alpha = 0.5e7;
    c.integrator.method = IntegratorMethod::rk4;
    c.integrator.dt = 1e-10;
    c.integrator.t_end = 4e-7;
    c.integrator.store_stride = 10;
    c.window = kBenchmarkWindow;
    if (name == "fig3") {
        c.system.delta0 = 1e7;
    } else if (name == "fig4") {
        c.system.delta0 = 1e8;
    } else if (name == "fig5") {
        c.system.delta0 = 1e7;
        c.sweep_rates = default_sweep_rates();
    } else if (name == "tau") {
        c.tau = DecoherenceGridSpec{};
    } else {
        throw ConfigError("unknown demo preset '" + name + "'");
    }
    return c;
}

int cmd_demo_figures(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    namespace fs = std::filesystem;
    const fs::path dir = opts.out.empty() ? fs::path("figures") : fs::path(opts.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    auto path = [&](const std::string& file) { return (dir / file).string(); };

    for (const std::string name : {"fig3", "fig4"}) {
        RunConfig c = demo_config(name);
        c.output = {path(name + ".csv"), path(name + ".svg")};
        io::write_file(path(name + ".cfg"), serialize(c));
        out << name << ": ";
        cmd_compare(c, {}, out, err);
    }

    RunConfig sweep = demo_config("fig5");
    sweep.output = {path("fig5.csv"), path("fig5.svg")};
    io::write_file(path("fig5.cfg"), serialize(sweep));
    CommandOptions sweep_opts;
    sweep_opts.series = path("fig5_series.csv");
    sweep_opts.workers = opts.workers;
    out << "fig5: ";
    cmd_sweep(sweep, sweep_opts, out, err);

    RunConfig tau = demo_config("tau");
    tau.output.csv = path("tau.csv");
    io::write_file(path("tau.cfg"), serialize(tau));
    out << "tau: ";
    cmd_tau(tau, {}, out, err);
    return kOk;
}

int run(const std::string& command, const std::string& config_path, const CommandOptions& opts, std::ostream& out,
        std::ostream& err) {
    try {
        if (command == "demo-figures") return cmd_demo_figures(opts, out, err);
        if (config_path.empty()) throw ConfigError("--config is required for '" + command + "'");
        const RunConfig config = with_overrides(load_config(config_path), opts);
        if (command == "coeffs") return cmd_coeffs(config, opts, out, err);
        if (command == "evolve") return cmd_evolve(config, opts, out, err);
        if (command == "ensemble") return cmd_ensemble(config, opts, out, err);
        if (command == "compare") return cmd_compare(config, opts, out, err);
        if (command == "sweep") return cmd_sweep(config, opts, out, err);
        if (command == "tau") return cmd_tau(config, opts, out, err);
        throw ConfigError("unknown command '" + command + "'");
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    }
}

}  // namespace sbnoise::cli
