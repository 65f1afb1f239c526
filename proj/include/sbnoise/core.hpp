// core.hpp - domain types and two-level density-matrix algebra.
//
// Units: hbar = 1, every energy is an angular frequency in s^-1, times in s.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbnoise {

using cplx = std::complex<double>;

// Error taxonomy shared by every module; the CLI maps these onto exit codes.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// 2x2 density operator in the sigma_z eigenbasis: |0> = ions at sites 1,3,
/// |1> = ions at sites 2,4. All four entries are stored independently since
/// Hermiticity is not preserved by every supported equation of motion.
struct DensityMatrix2 {
    cplx rho00{};
    cplx rho01{};
    cplx rho10{};
    cplx rho11{};

    [[nodiscard]] cplx trace() const { return rho00 + rho11; }
    [[nodiscard]] double trace_defect() const { return std::abs(trace() - 1.0); }
    [[nodiscard]] double hermiticity_defect() const { return std::abs(rho10 - std::conj(rho01)); }
    [[nodiscard]] bool is_finite() const;

    /// Outer product |psi><psi| of a (not necessarily normalized) pure state.
    static DensityMatrix2 from_pure(cplx amp0, cplx amp1);
    static DensityMatrix2 diagonal(double p0, double p1);

    DensityMatrix2& operator+=(const DensityMatrix2& o);
    DensityMatrix2& operator-=(const DensityMatrix2& o);
    DensityMatrix2& operator*=(double s);
    DensityMatrix2& operator*=(cplx s);

    friend DensityMatrix2 operator+(DensityMatrix2 a, const DensityMatrix2& b) { return a += b; }
    friend DensityMatrix2 operator-(DensityMatrix2 a, const DensityMatrix2& b) { return a -= b; }
    friend DensityMatrix2 operator*(double s, DensityMatrix2 a) { return a *= s; }
    friend DensityMatrix2 operator*(DensityMatrix2 a, double s) { return a *= s; }
    friend DensityMatrix2 operator*(cplx s, DensityMatrix2 a) { return a *= s; }

    friend bool operator==(const DensityMatrix2&, const DensityMatrix2&) = default;
};

/// tr(rho^2) = |rho00|^2 + |rho11|^2 + 2 Re(rho01 rho10).
[[nodiscard]] double purity(const DensityMatrix2& rho);

/// Largest elementwise modulus of a - b.
[[nodiscard]] double max_abs_diff(const DensityMatrix2& a, const DensityMatrix2& b);

/// The equal superposition (|0> + |1>)/sqrt(2): every entry is 1/2.
[[nodiscard]] DensityMatrix2 initial_superposition();

struct SystemParams {
    double omega0{0.0};  // asymmetry energy
    double delta0{0.0};  // tunneling matrix element (hopping rate)

    void validate() const;
};

/// Ohmic bath with Lorentz-Drude cutoff, plus the thermal energy k_B T / hbar.
struct EnvironmentParams {
    double mass_scale{1.0};  // M
    double gamma0{0.0};      // effective coupling strength
    double omega_c{1.0};     // cutoff frequency
    double kbt{1.0};         // thermal energy as a frequency

    void validate() const;
};

/// Master-equation coefficients D, f, gamma with zeta = f - i gamma.
class CoefficientSet {
public:
    CoefficientSet() = default;
    CoefficientSet(double D, double f, double gamma) : D_(D), f_(f), gamma_(gamma), zeta_(f, -gamma) {}

    [[nodiscard]] double D() const { return D_; }
    [[nodiscard]] double f() const { return f_; }
    [[nodiscard]] double gamma() const { return gamma_; }
    [[nodiscard]] cplx zeta() const { return zeta_; }

    friend bool operator==(const CoefficientSet&, const CoefficientSet&) = default;

private:
    double D_{0.0};
    double f_{0.0};
    double gamma_{0.0};
    cplx zeta_{0.0, 0.0};
};

/// White-noise strength: C(t) = alpha delta(t).
struct NoiseParams {
    double alpha{0.0};

    void validate() const;
};

struct StepDiagnostics {
    double trace_defect{0.0};
    double hermiticity_defect{0.0};
    double purity{0.0};
};

[[nodiscard]] StepDiagnostics diagnose(const DensityMatrix2& rho);

/// Sampled evolution. times is strictly increasing and parallel to states and
/// diagnostics; states.front() is the initial state as supplied.
struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix2> states;
    std::vector<StepDiagnostics> diagnostics;

    void push_back(double t, const DensityMatrix2& rho);
    [[nodiscard]] std::size_t size() const { return times.size(); }
    [[nodiscard]] bool empty() const { return times.empty(); }
    /// Throws ConfigError unless the invariants above hold.
    void check_invariants() const;
};

[[nodiscard]] bool same_grid(const Trajectory& a, const Trajectory& b);

namespace units {

inline constexpr double boltzmann = 1.380649e-23;       // J/K, exact (SI 2019)
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double kb_over_hbar = boltzmann / hbar;  // s^-1 K^-1

}  // namespace units

/// k_B T / hbar in s^-1. Throws ConfigError for T <= 0 or non-finite T.
[[nodiscard]] double kelvin_to_thermal_freq(double kelvin);

}  // namespace sbnoise
