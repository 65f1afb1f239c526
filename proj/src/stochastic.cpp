#include "sbnoise/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace sbnoise {

namespace {

constexpr std::size_t kBatch = 256;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// exp(-i H0 t) for H0 = (w0/2) sigma_z - (delta0/2) sigma_x, row-major 2x2.
struct Unitary2 {
    cplx u00{1.0}, u01{}, u10{}, u11{1.0};

    static Unitary2 free_propagator(const SystemParams& sys, double t) {
        const double hz = 0.5 * sys.omega0;
        const double hx = -0.5 * sys.delta0;
        const double norm = std::hypot(hz, hx);
        if (norm == 0.0) return {};
        const double c = std::cos(norm * t);
        const double s = std::sin(norm * t);
        const double nz = hz / norm;
        const double nx = hx / norm;
        return {cplx(c, -s * nz), cplx(0.0, -s * nx), cplx(0.0, -s * nx), cplx(c, s * nz)};
    }

    void apply(cplx& a, cplx& b) const {
        const cplx a2 = u00 * a + u01 * b;
        const cplx b2 = u10 * a + u11 * b;
        a = a2;
        b = b2;
    }
};

struct Grid {
    std::size_t steps{0};
    double h{0.0};
};

Grid make_grid(const EnsembleSpec& spec) {
    if (spec.t_end == 0.0) return {};
    const auto steps = static_cast<std::size_t>(std::ceil(spec.t_end / spec.dt * (1.0 - 1e-12)));
    return {steps, spec.t_end / static_cast<double>(steps)};
}

std::vector<double> stored_times(const EnsembleSpec& spec) {
    const Grid g = make_grid(spec);
    std::vector<double> times{0.0};
    for (std::size_t k = 1; k <= g.steps; ++k) {
        if (k == g.steps) {
            times.push_back(spec.t_end);
        } else if (k % spec.store_stride == 0) {
            times.push_back(static_cast<double>(k) * g.h);
        }
    }
    return times;
}

// Propagates one realization and writes the pure-state density matrix at each
// stored step into `out` (sized to stored_times(spec).size()).
void propagate(const SystemParams& sys, const NoiseParams& noise, const EnsembleSpec& spec, std::size_t index,
               std::vector<DensityMatrix2>& out) {
    const Grid g = make_grid(spec);
    const bool strang = spec.splitting == Splitting::strang;
    const Unitary2 drift = Unitary2::free_propagator(sys, strang ? 0.5 * g.h : g.h);

    std::mt19937_64 engine(realization_seed(spec.master_seed, index));
    const double kick_sd = std::sqrt(noise.alpha * g.h);
    std::normal_distribution<double> kick(0.0, kick_sd > 0.0 ? kick_sd : 1.0);

    const double amp = 1.0 / std::sqrt(2.0);
    cplx a{amp}, b{amp};
    std::size_t slot = 0;
    out[slot++] = DensityMatrix2::from_pure(a, b);
    for (std::size_t k = 1; k <= g.steps; ++k) {
        if (strang) drift.apply(a, b);
        const double w = kick_sd > 0.0 ? kick(engine) : 0.0;
        const cplx phase = std::polar(1.0, -w);
        a *= phase;
        b *= std::conj(phase);
        drift.apply(a, b);
        if (k == g.steps || k % spec.store_stride == 0) out[slot++] = DensityMatrix2::from_pure(a, b);
    }
}

void check_inputs(const SystemParams& sys, const NoiseParams& noise, const EnsembleSpec& spec) {
    sys.validate();
    noise.validate();
    spec.validate();
}

}  // namespace

std::string to_string(Splitting s) { return s == Splitting::lie ? "lie" : "strang"; }

Splitting parse_splitting(const std::string& text) {
    if (text == "lie") return Splitting::lie;
    if (text == "strang") return Splitting::strang;
    throw ConfigError("unknown splitting '" + text + "' (expected lie|strang)");
}

void EnsembleSpec::validate() const {
    if (realizations < 1) throw ConfigError("ensemble.realizations must be >= 1");
    if (!(std::isfinite(dt) && dt > 0.0)) throw ConfigError("ensemble.dt must be > 0");
    if (!(std::isfinite(t_end) && t_end >= 0.0)) throw ConfigError("ensemble.t_end must be >= 0");
    if (store_stride < 1) throw ConfigError("ensemble.store_stride must be >= 1");
}

std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t index) {
    return mix64(mix64(master_seed) ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

Trajectory sample_realization(const SystemParams& sys, const NoiseParams& noise, const EnsembleSpec& spec,
                              std::size_t index) {
    check_inputs(sys, noise, spec);
    if (index >= spec.realizations) throw ConfigError("realization index out of range");
    const auto times = stored_times(spec);
    std::vector<DensityMatrix2> states(times.size());
    propagate(sys, noise, spec, index, states);
    Trajectory traj;
    for (std::size_t i = 0; i < times.size(); ++i) traj.push_back(times[i], states[i]);
    return traj;
}

EnsembleResult ensemble_average(const SystemParams& sys, const NoiseParams& noise, const EnsembleSpec& spec,
                                unsigned workers) {
    check_inputs(sys, noise, spec);
    workers = std::max(1u, workers);
    const auto times = stored_times(spec);
    const std::size_t points = times.size();

    std::vector<DensityMatrix2> sum(points);
    // Welford accumulators for Re/Im rho01.
    std::vector<double> mean_re(points, 0.0), m2_re(points, 0.0), mean_im(points, 0.0), m2_im(points, 0.0);

    std::vector<std::vector<DensityMatrix2>> batch(kBatch, std::vector<DensityMatrix2>(points));
    std::size_t seen = 0;
    for (std::size_t first = 0; first < spec.realizations; first += kBatch) {
        const std::size_t count = std::min(kBatch, spec.realizations - first);
        {
            std::vector<std::jthread> pool;
            const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, count));
            for (unsigned w = 0; w < used; ++w) {
                pool.emplace_back([&, w] {
                    for (std::size_t j = w; j < count; j += used) propagate(sys, noise, spec, first + j, batch[j]);
                });
            }
        }
        // Reduction in ascending realization index.
        for (std::size_t j = 0; j < count; ++j) {
            ++seen;
            const double n = static_cast<double>(seen);
            for (std::size_t p = 0; p < points; ++p) {
                const DensityMatrix2& r = batch[j][p];
                sum[p] += r;
                const double re = r.rho01.real();
                const double im = r.rho01.imag();
                const double d_re = re - mean_re[p];
                mean_re[p] += d_re / n;
                m2_re[p] += d_re * (re - mean_re[p]);
                const double d_im = im - mean_im[p];
                mean_im[p] += d_im / n;
                m2_im[p] += d_im * (im - mean_im[p]);
            }
        }
    }

    EnsembleResult result;
    result.realizations = spec.realizations;
    const double n = static_cast<double>(spec.realizations);
    for (std::size_t p = 0; p < points; ++p) {
        result.mean_trajectory.push_back(times[p], sum[p] * (1.0 / n));
        if (spec.realizations > 1) {
            result.stderr_re_rho01.push_back(std::sqrt(m2_re[p] / (n - 1.0) / n));
            result.stderr_im_rho01.push_back(std::sqrt(m2_im[p] / (n - 1.0) / n));
        } else {
            result.stderr_re_rho01.push_back(std::numeric_limits<double>::quiet_NaN());
            result.stderr_im_rho01.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    return result;
}

DeviationReport compare_to_master(const EnsembleResult& result, const Trajectory& reference) {
    const Trajectory& mean = result.mean_trajectory;
    if (!same_grid(mean, reference)) throw ConfigError("ensemble and reference trajectories use different time grids");

    DeviationReport report;
    std::size_t judged = 0;
    std::size_t outside = 0;
    for (std::size_t i = 0; i < mean.size(); ++i) {
        const DensityMatrix2& m = mean.states[i];
        const DensityMatrix2& r = reference.states[i];
        const std::array<double, 4> dev{std::abs(m.rho00 - r.rho00), std::abs(m.rho01 - r.rho01),
                                        std::abs(m.rho10 - r.rho10), std::abs(m.rho11 - r.rho11)};
        report.per_time.push_back(dev);
        for (std::size_t k = 0; k < 4; ++k) report.sup[k] = std::max(report.sup[k], dev[k]);
        const double d_re = std::abs(m.rho01.real() - r.rho01.real());
        const double d_im = std::abs(m.rho01.imag() - r.rho01.imag());
        report.sup_re_rho01 = std::max(report.sup_re_rho01, d_re);
        report.sup_im_rho01 = std::max(report.sup_im_rho01, d_im);
        const double se_re = result.stderr_re_rho01.at(i);
        const double se_im = result.stderr_im_rho01.at(i);
        if (std::isfinite(se_re) && std::isfinite(se_im)) {
            ++judged;
            if (d_re > 5.0 * se_re || d_im > 5.0 * se_im) ++outside;
        }
    }
    report.fraction_outside_5_stderr = judged ? static_cast<double>(outside) / static_cast<double>(judged) : 0.0;
    return report;
}

}  // namespace sbnoise
