#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "sbnoise/dynamics.hpp"
#include "sbnoise/stochastic.hpp"

using namespace sbnoise;

namespace {

EnsembleSpec make_spec(std::size_t n, double dt, double t_end, std::size_t stride = 1) {
    EnsembleSpec s;
    s.realizations = n;
    s.dt = dt;
    s.t_end = t_end;
    s.store_stride = stride;
    s.master_seed = 42;
    return s;
}

bool same(const Trajectory& a, const Trajectory& b) { return a.times == b.times && a.states == b.states; }

double mean_stderr(const EnsembleResult& r) {
    double s = 0.0;
    std::size_t n = 0;
    for (double v : r.stderr_re_rho01) {
        if (std::isfinite(v) && v > 0.0) {
            s += v;
            ++n;
        }
    }
    return s / static_cast<double>(n);
}

}  // namespace

TEST_CASE("realization seeds are distinct and reproducible") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(realization_seed(1, i));
    for (std::uint64_t m = 0; m < 1000; ++m) seen.insert(realization_seed(m + 2, 0));
    CHECK(seen.size() == 2000);
    CHECK(realization_seed(5, 9) == realization_seed(5, 9));
}

TEST_CASE("noise-free realizations follow the free unitary evolution") {
    const SystemParams sys{1.5, 2.5};
    const EnsembleSpec spec = make_spec(3, 0.01, 2.0, 10);
    const Trajectory t = sample_realization(sys, NoiseParams{0.0}, spec, 1);
    const Trajectory ref = evolve_classical_noise(sys, NoiseParams{0.0}, initial_superposition(),
                                                  [] {
                                                      IntegratorSpec s;
                                                      s.dt = 1e-4;
                                                      s.t_end = 2.0;
                                                      s.store_stride = 1000;
                                                      return s;
                                                  }());
    REQUIRE(t.size() == ref.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        CHECK(t.times[k] == doctest::Approx(ref.times[k]).epsilon(1e-12));
        CHECK(max_abs_diff(t.states[k], ref.states[k]) <= 1e-10);
    }
    CHECK(same(t, sample_realization(sys, NoiseParams{0.0}, spec, 2)));
}

TEST_CASE("pure random phase when only the noise acts") {
    const EnsembleSpec spec = make_spec(10, 0.01, 1.0);
    for (std::size_t i = 0; i < 10; ++i) {
        const Trajectory t = sample_realization(SystemParams{0.0, 0.0}, NoiseParams{1.0}, spec, i);
        for (std::size_t k = 0; k < t.size(); ++k) {
            CHECK(std::abs(std::abs(t.states[k].rho01) - 0.5) <= 1e-12);
            CHECK(std::abs(t.states[k].rho00 - 0.5) <= 1e-12);
            CHECK(std::abs(t.states[k].rho11 - 0.5) <= 1e-12);
        }
    }
}

TEST_CASE("each realization is unitary and reproducible") {
    const SystemParams sys{1e7, 1e8};
    const EnsembleSpec spec = make_spec(4, 1e-10, 2e-7);
    const Trajectory a = sample_realization(sys, NoiseParams{0.5e7}, spec, 3);
    const Trajectory b = sample_realization(sys, NoiseParams{0.5e7}, spec, 3);
    const Trajectory c = sample_realization(sys, NoiseParams{0.5e7}, spec, 2);
    CHECK(same(a, b));
    CHECK_FALSE(same(a, c));
    for (const auto& d : a.diagnostics) {
        CHECK(std::abs(d.purity - 1.0) <= 1e-12);
        CHECK(d.trace_defect <= 1e-12);
    }
    CHECK_THROWS_AS((void)sample_realization(sys, NoiseParams{0.5e7}, spec, 4), ConfigError);
}

TEST_CASE("ensemble mean reproduces the Gaussian phase average") {
    const EnsembleSpec spec = make_spec(10000, 0.01, 1.0, 10);
    const EnsembleResult r = ensemble_average(SystemParams{0.0, 0.0}, NoiseParams{1.0}, spec);
    CHECK(r.realizations == 10000);
    const double mean = r.mean_trajectory.states.back().rho01.real();
    CHECK(std::abs(mean - 0.5 * std::exp(-2.0)) <= 5.0 * r.stderr_re_rho01.back());
    for (std::size_t k = 0; k < r.mean_trajectory.size(); ++k) {
        CHECK(r.mean_trajectory.diagnostics[k].trace_defect <= 1e-12);
        CHECK(std::abs(r.mean_trajectory.states[k].rho00 - 0.5) <= 1e-12);
    }
}

TEST_CASE("single-realization ensemble") {
    const SystemParams sys{1.0, 2.0};
    const EnsembleSpec spec = make_spec(1, 0.01, 1.0);
    const EnsembleResult r = ensemble_average(sys, NoiseParams{0.3}, spec);
    CHECK(same(r.mean_trajectory, sample_realization(sys, NoiseParams{0.3}, spec, 0)));
    for (double v : r.stderr_re_rho01) CHECK(std::isnan(v));
    for (double v : r.stderr_im_rho01) CHECK(std::isnan(v));
}

TEST_CASE("ensemble is independent of the worker count") {
    const SystemParams sys{1e7, 1e7};
    const EnsembleSpec spec = make_spec(700, 1e-10, 1e-7, 5);
    const EnsembleResult one = ensemble_average(sys, NoiseParams{0.5e7}, spec, 1);
    const EnsembleResult three = ensemble_average(sys, NoiseParams{0.5e7}, spec, 3);
    CHECK(same(one.mean_trajectory, three.mean_trajectory));
    CHECK(one.stderr_re_rho01 == three.stderr_re_rho01);
    CHECK(one.stderr_im_rho01 == three.stderr_im_rho01);
}

TEST_CASE("standard error falls as one over root N") {
    const SystemParams sys{0.0, 1e7};
    const EnsembleResult small = ensemble_average(sys, NoiseParams{0.5e7}, make_spec(2000, 1e-10, 2e-7, 20));
    const EnsembleResult large = ensemble_average(sys, NoiseParams{0.5e7}, make_spec(4000, 1e-10, 2e-7, 20));
    CHECK(mean_stderr(large) / mean_stderr(small) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.1));
}

TEST_CASE("comparison against a master-equation trajectory") {
    const SystemParams sys{0.0, 1e7};
    const EnsembleSpec spec = make_spec(2000, 1e-10, 2e-7, 20);
    const EnsembleResult r = ensemble_average(sys, NoiseParams{0.5e7}, spec);
    const DeviationReport self = compare_to_master(r, r.mean_trajectory);
    CHECK(self.sup == std::array<double, 4>{});
    CHECK(self.fraction_outside_5_stderr == 0.0);
    CHECK(self.per_time.size() == r.mean_trajectory.size());

    IntegratorSpec is;
    is.dt = 1e-10;
    is.t_end = 2e-7;
    is.store_stride = 20;
    const Trajectory ref = evolve_classical_noise(sys, NoiseParams{0.5e7}, initial_superposition(), is);
    const DeviationReport dev = compare_to_master(r, ref);
    CHECK(dev.sup_re_rho01 <= 5.0 / std::sqrt(2000.0));
    CHECK(dev.sup_im_rho01 <= 5.0 / std::sqrt(2000.0));
    CHECK(dev.fraction_outside_5_stderr <= 0.01);

    is.store_stride = 10;
    const Trajectory other = evolve_classical_noise(sys, NoiseParams{0.5e7}, initial_superposition(), is);
    CHECK_THROWS_AS((void)compare_to_master(r, other), ConfigError);
}

TEST_CASE("Strang splitting matches the free evolution without noise") {
    const SystemParams sys{1.5, 2.5};
    EnsembleSpec spec = make_spec(1, 0.01, 2.0, 50);
    spec.splitting = Splitting::strang;
    const Trajectory t = sample_realization(sys, NoiseParams{0.0}, spec, 0);
    spec.splitting = Splitting::lie;
    const Trajectory u = sample_realization(sys, NoiseParams{0.0}, spec, 0);
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(max_abs_diff(t.states[k], u.states[k]) <= 1e-12);
    CHECK(parse_splitting("strang") == Splitting::strang);
    CHECK(to_string(Splitting::lie) == "lie");
    CHECK_THROWS_AS((void)parse_splitting("yoshida"), ConfigError);
}

TEST_CASE("ensemble spec validation") {
    CHECK_THROWS_AS(make_spec(0, 0.1, 1.0).validate(), ConfigError);
    CHECK_THROWS_AS(make_spec(1, 0.0, 1.0).validate(), ConfigError);
    CHECK_THROWS_AS(make_spec(1, 0.1, -1.0).validate(), ConfigError);
    CHECK_THROWS_AS(make_spec(1, 0.1, 1.0, 0).validate(), ConfigError);
    const EnsembleResult r = ensemble_average(SystemParams{1.0, 1.0}, NoiseParams{1.0}, make_spec(5, 0.1, 0.0));
    CHECK(r.mean_trajectory.size() == 1);
}
