#include "sbnoise/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <set>
#include <sstream>

#include "sbnoise/io.hpp"

namespace sbnoise {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "model",
        "mode",
        "system.omega0",
        "system.delta0",
        "environment.mass_scale",
        "environment.gamma0",
        "environment.omega_c",
        "environment.kbt",
        "environment.temperature_kelvin",
        "coefficients.D",
        "coefficients.f",
        "coefficients.gamma",
        "noise.alpha",
        "integrator.method",
        "integrator.dt",
        "integrator.rel_tol",
        "integrator.abs_tol",
        "integrator.t_end",
        "integrator.store_stride",
        "integrator.renormalize_trace",
        "ensemble.realizations",
        "ensemble.dt",
        "ensemble.t_end",
        "ensemble.seed",
        "ensemble.store_stride",
        "ensemble.splitting",
        "quadrature.max_frequency",
        "quadrature.max_lag",
        "quadrature.panel_count",
        "quadrature.scheme",
        "quadrature.rel_tol",
        "analysis.window_start",
        "analysis.window_end",
        "sweep.rates",
        "tau.rates",
        "tau.frequencies",
        "tau.axis",
        "tau.mass",
        "tau.temperature",
        "tau.cutoff",
        "tau.dispersion",
        "output.csv",
        "output.svg",
    };
    return keys;
}

class Reader {
public:
    explicit Reader(KeyValues kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    bool has_section(const std::string& prefix) const {
        const auto it = kv_.lower_bound(prefix + ".");
        return it != kv_.end() && it->first.rfind(prefix + ".", 0) == 0;
    }

    const std::string& text(const std::string& key) const {
        const auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigError("missing required key '" + key + "'");
        return it->second;
    }

    double number(const std::string& key) const {
        try {
            return io::parse_double(text(key));
        } catch (const ConfigError&) {
            if (!has(key)) throw;
            throw ConfigError("key '" + key + "' is not a number: '" + text(key) + "'");
        }
    }

    double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

    std::uint64_t unsigned_integer(const std::string& key) const {
        const std::string& t = text(key);
        if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) {
            throw ConfigError("key '" + key + "' must be a non-negative integer");
        }
        try {
            return std::stoull(t);
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' is out of range");
        }
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
        return has(key) ? unsigned_integer(key) : fallback;
    }

    bool boolean(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string& t = text(key);
        if (t == "true") return true;
        if (t == "false") return false;
        throw ConfigError("key '" + key + "' must be true or false");
    }

    std::vector<double> list(const std::string& key) const {
        std::vector<double> out;
        std::stringstream ss(text(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(io::parse_double(item));
            } catch (const ConfigError&) {
                throw ConfigError("key '" + key + "' has a non-numeric entry '" + item + "'");
            }
        }
        if (out.empty()) throw ConfigError("key '" + key + "' must list at least one value");
        return out;
    }

private:
    KeyValues kv_;
};

std::string list_text(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + io::format_double(values[i]);
    return out;
}

std::string to_string(QuadratureScheme s) { return s == QuadratureScheme::adaptive ? "adaptive" : "fixed-panel"; }

QuadratureScheme parse_scheme(const std::string& t) {
    if (t == "adaptive") return QuadratureScheme::adaptive;
    if (t == "fixed-panel") return QuadratureScheme::fixed_panel;
    throw ConfigError("unknown quadrature scheme '" + t + "' (expected adaptive|fixed-panel)");
}

std::string to_string(RateAxis a) { return a == RateAxis::diffusion ? "diffusion" : "coupling"; }

RateAxis parse_axis(const std::string& t) {
    if (t == "diffusion") return RateAxis::diffusion;
    if (t == "coupling") return RateAxis::coupling;
    throw ConfigError("unknown tau.axis '" + t + "' (expected diffusion|coupling)");
}

}  // namespace

std::string to_string(Model m) {
    switch (m) {
        case Model::spin_boson: return "spin-boson";
        case Model::noise: return "noise";
        case Model::both: return "both";
    }
    return "both";
}

Model parse_model(const std::string& text) {
    if (text == "spin-boson") return Model::spin_boson;
    if (text == "noise") return Model::noise;
    if (text == "both") return Model::both;
    throw ConfigError("unknown model '" + text + "' (expected spin-boson|noise|both)");
}

void RunConfig::validate() const {
    if (environment && coefficients) {
        throw ConfigError("environment and coefficients blocks are mutually exclusive");
    }
    system.validate();
    if (environment) environment->validate();
    noise.validate();
    integrator.validate();
    if (ensemble) ensemble->validate();
    if (quadrature && environment) quadrature->validate(*environment);
    if (window.end < window.start) throw ConfigError("analysis.window_end must be >= analysis.window_start");
}

CoefficientSet RunConfig::resolved_coefficients() const {
    if (coefficients) return *coefficients;
    if (environment) return coeff_closed(*environment, system.delta0);
    throw ConfigError("the spin-boson model needs a coefficients block or an environment block");
}

ComparisonConfig RunConfig::comparison(bool derive_per_rate) const {
    ComparisonConfig c;
    c.omega0 = system.omega0;
    if (derive_per_rate) {
        if (!environment) throw ConfigError("--derive-coeffs needs an environment block");
        c.environment = environment;
    } else {
        c.coefficients = resolved_coefficients();
    }
    c.noise = noise;
    c.mode = mode;
    c.integrator = integrator;
    c.window = window;
    return c;
}

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_keys().count(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (!kv.emplace(key, value).second) {
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

RunConfig parse_config(const std::string& text) {
    const Reader r(parse_key_values(text));
    RunConfig c;
    if (r.has("model")) c.model = parse_model(r.text("model"));
    if (r.has("mode")) c.mode = parse_spin_boson_mode(r.text("mode"));
    c.system.omega0 = r.number("system.omega0", 0.0);
    c.system.delta0 = r.number("system.delta0", 0.0);

    if (r.has_section("environment")) {
        EnvironmentParams env;
        env.mass_scale = r.number("environment.mass_scale", 1.0);
        env.gamma0 = r.number("environment.gamma0");
        env.omega_c = r.number("environment.omega_c");
        if (r.has("environment.kbt") == r.has("environment.temperature_kelvin")) {
            throw ConfigError("give exactly one of environment.kbt and environment.temperature_kelvin");
        }
        env.kbt = r.has("environment.kbt") ? r.number("environment.kbt")
                                           : kelvin_to_thermal_freq(r.number("environment.temperature_kelvin"));
        c.environment = env;
    }
    if (r.has_section("coefficients")) {
        c.coefficients = CoefficientSet(r.number("coefficients.D"), r.number("coefficients.f"),
                                        r.number("coefficients.gamma"));
    }
    c.noise.alpha = r.number("noise.alpha", 0.0);

    IntegratorSpec& in = c.integrator;
    if (r.has("integrator.method")) in.method = parse_integrator_method(r.text("integrator.method"));
    in.dt = r.number("integrator.dt", in.dt);
    in.rel_tol = r.number("integrator.rel_tol", in.rel_tol);
    in.abs_tol = r.number("integrator.abs_tol", in.abs_tol);
    in.t_end = r.number("integrator.t_end", in.t_end);
    in.store_stride = r.unsigned_integer("integrator.store_stride", in.store_stride);
    in.renormalize_trace = r.boolean("integrator.renormalize_trace", in.renormalize_trace);

    if (r.has_section("ensemble")) {
        EnsembleSpec e;
        e.realizations = r.unsigned_integer("ensemble.realizations");
        e.dt = r.number("ensemble.dt", in.dt);
        e.t_end = r.number("ensemble.t_end", in.t_end);
        e.master_seed = r.unsigned_integer("ensemble.seed", 0);
        e.store_stride = r.unsigned_integer("ensemble.store_stride", in.store_stride);
        if (r.has("ensemble.splitting")) e.splitting = parse_splitting(r.text("ensemble.splitting"));
        c.ensemble = e;
    }

    if (r.has_section("quadrature")) {
        QuadratureSpec q = c.environment ? default_quadrature(*c.environment, c.system.delta0) : QuadratureSpec{};
        q.max_frequency = r.number("quadrature.max_frequency", q.max_frequency);
        q.max_lag = r.number("quadrature.max_lag", q.max_lag);
        q.panel_count = r.unsigned_integer("quadrature.panel_count", q.panel_count);
        if (r.has("quadrature.scheme")) q.scheme = parse_scheme(r.text("quadrature.scheme"));
        q.rel_tol = r.number("quadrature.rel_tol", q.rel_tol);
        c.quadrature = q;
    }

    c.window.start = r.number("analysis.window_start", c.window.start);
    c.window.end = r.number("analysis.window_end", c.window.end);
    if (r.has("sweep.rates")) c.sweep_rates = r.list("sweep.rates");

    if (r.has_section("tau")) {
        DecoherenceGridSpec t;
        t.mass = r.number("tau.mass");
        t.temperature = r.number("tau.temperature");
        if (r.has("tau.rates")) t.rates = r.list("tau.rates");
        if (r.has("tau.frequencies")) t.frequencies = r.list("tau.frequencies");
        if (r.has("tau.axis")) t.axis = parse_axis(r.text("tau.axis"));
        t.cutoff = r.number("tau.cutoff", t.cutoff);
        if (r.has("tau.dispersion")) t.dispersion = r.number("tau.dispersion");
        c.tau = t;
    }

    if (r.has("output.csv")) c.output.csv = r.text("output.csv");
    if (r.has("output.svg")) c.output.svg = r.text("output.svg");
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) { return parse_config(io::read_file(path)); }

std::string serialize(const RunConfig& c) {
    using io::format_double;
    std::ostringstream os;
    os << "model = " << to_string(c.model) << '\n';
    os << "mode = " << to_string(c.mode) << '\n';
    os << "system.omega0 = " << format_double(c.system.omega0) << '\n';
    os << "system.delta0 = " << format_double(c.system.delta0) << '\n';
    if (c.environment) {
        os << "environment.mass_scale = " << format_double(c.environment->mass_scale) << '\n';
        os << "environment.gamma0 = " << format_double(c.environment->gamma0) << '\n';
        os << "environment.omega_c = " << format_double(c.environment->omega_c) << '\n';
        os << "environment.kbt = " << format_double(c.environment->kbt) << '\n';
    }
    if (c.coefficients) {
        os << "coefficients.D = " << format_double(c.coefficients->D()) << '\n';
        os << "coefficients.f = " << format_double(c.coefficients->f()) << '\n';
        os << "coefficients.gamma = " << format_double(c.coefficients->gamma()) << '\n';
    }
    os << "noise.alpha = " << format_double(c.noise.alpha) << '\n';
    const IntegratorSpec& in = c.integrator;
    os << "integrator.method = " << to_string(in.method) << '\n';
    os << "integrator.dt = " << format_double(in.dt) << '\n';
    os << "integrator.rel_tol = " << format_double(in.rel_tol) << '\n';
    os << "integrator.abs_tol = " << format_double(in.abs_tol) << '\n';
    os << "integrator.t_end = " << format_double(in.t_end) << '\n';
    os << "integrator.store_stride = " << in.store_stride << '\n';
    os << "integrator.renormalize_trace = " << (in.renormalize_trace ? "true" : "false") << '\n';
    if (c.ensemble) {
        const EnsembleSpec& e = *c.ensemble;
        os << "ensemble.realizations = " << e.realizations << '\n';
        os << "ensemble.dt = " << format_double(e.dt) << '\n';
        os << "ensemble.t_end = " << format_double(e.t_end) << '\n';
        os << "ensemble.seed = " << e.master_seed << '\n';
        os << "ensemble.store_stride = " << e.store_stride << '\n';
        os << "ensemble.splitting = " << to_string(e.splitting) << '\n';
    }
    if (c.quadrature) {
        const QuadratureSpec& q = *c.quadrature;
        os << "quadrature.max_frequency = " << format_double(q.max_frequency) << '\n';
        os << "quadrature.max_lag = " << format_double(q.max_lag) << '\n';
        os << "quadrature.panel_count = " << q.panel_count << '\n';
        os << "quadrature.scheme = " << to_string(q.scheme) << '\n';
        os << "quadrature.rel_tol = " << format_double(q.rel_tol) << '\n';
    }
    os << "analysis.window_start = " << format_double(c.window.start) << '\n';
    os << "analysis.window_end = " << format_double(c.window.end) << '\n';
    os << "sweep.rates = " << list_text(c.sweep_rates) << '\n';
    if (c.tau) {
        const DecoherenceGridSpec& t = *c.tau;
        os << "tau.rates = " << list_text(t.rates) << '\n';
        os << "tau.frequencies = " << list_text(t.frequencies) << '\n';
        os << "tau.axis = " << to_string(t.axis) << '\n';
        os << "tau.mass = " << format_double(t.mass) << '\n';
        os << "tau.temperature = " << format_double(t.temperature) << '\n';
        os << "tau.cutoff = " << format_double(t.cutoff) << '\n';
        if (t.dispersion) os << "tau.dispersion = " << format_double(*t.dispersion) << '\n';
    }
    if (!c.output.csv.empty()) os << "output.csv = " << c.output.csv << '\n';
    if (!c.output.svg.empty()) os << "output.svg = " << c.output.svg << '\n';
    return os.str();
}

}  // namespace sbnoise
