// stochastic.hpp - Monte Carlo ensembles of unitary evolutions under the
// stochastic Hamiltonian H(t) = H0 + z(t) sigma_z with Gaussian white z(t).

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sbnoise/core.hpp"

namespace sbnoise {

/// Lie: U = exp(-i H0 dt) exp(-i sigma_z W). Strang: half drift, kick, half drift.
enum class Splitting { lie, strang };

[[nodiscard]] std::string to_string(Splitting s);
[[nodiscard]] Splitting parse_splitting(const std::string& text);

struct EnsembleSpec {
    std::size_t realizations{1};
    double dt{1e-10};
    double t_end{0.0};
    std::uint64_t master_seed{0};
    std::size_t store_stride{1};
    Splitting splitting{Splitting::lie};

    void validate() const;
};

/// Seed of realization `index`: a pure function of (master_seed, index).
[[nodiscard]] std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t index);

/// One noise realization starting from (|0> + |1>)/sqrt(2). Each step applies a
/// phase kick exp(-i sigma_z W) with W ~ Normal(0, alpha dt) and the free
/// propagator exp(-i H0 dt); the stored states are pure.
[[nodiscard]] Trajectory sample_realization(const SystemParams& sys, const NoiseParams& noise,
                                            const EnsembleSpec& spec, std::size_t index);

struct EnsembleResult {
    Trajectory mean_trajectory;
    std::vector<double> stderr_re_rho01;  // NaN when realizations == 1
    std::vector<double> stderr_im_rho01;
    std::size_t realizations{0};
};

/// Ensemble mean accumulated in ascending realization order, so the result is
/// bit-identical for any worker count.
[[nodiscard]] EnsembleResult ensemble_average(const SystemParams& sys, const NoiseParams& noise,
                                              const EnsembleSpec& spec, unsigned workers = 1);

struct DeviationReport {
    std::vector<std::array<double, 4>> per_time;  // |mean - reference| for rho00, rho01, rho10, rho11
    std::array<double, 4> sup{};
    double sup_re_rho01{0.0};
    double sup_im_rho01{0.0};
    double fraction_outside_5_stderr{0.0};  // over points with a finite standard error
};

/// Throws ConfigError if the time grids differ.
[[nodiscard]] DeviationReport compare_to_master(const EnsembleResult& result, const Trajectory& reference);

}  // namespace sbnoise
