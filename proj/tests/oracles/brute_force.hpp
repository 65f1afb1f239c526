// Reference integrator for the two master equations, kept independent of the
// library: real 8-component state, derivative written out by hand in real
// arithmetic, and stepping by a fixed one-step propagator exp(G h) built from
// a truncated Taylor series of the 8x8 generator.
//
// State layout: [Re r00, Im r00, Re r01, Im r01, Re r10, Im r10, Re r11, Im r11].

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

using State = std::array<double, 8>;
using Matrix = std::array<std::array<double, 8>, 8>;

struct Params {
    double omega0;
    double delta0;
    double D;      // spin-boson
    double f;      // spin-boson
    double gamma;  // spin-boson
    double alpha;  // noise
};

// Spin-boson, hermitian form: the r10 derivative is the conjugate of the r01 one.
inline State deriv_spin_boson(const State& x, const Params& p) {
    const double h = 0.5 * p.delta0;
    const double re00 = x[0], im00 = x[1], re01 = x[2], im01 = x[3];
    const double re10 = x[4], im10 = x[5], re11 = x[6], im11 = x[7];
    State d{};
    d[0] = -h * (im10 - im01) + 2.0 * p.gamma * re01;
    d[1] = h * (re10 - re01) + 2.0 * p.gamma * im01;
    d[6] = -h * (im01 - im10) + 2.0 * p.gamma * re10;
    d[7] = h * (re01 - re10) + 2.0 * p.gamma * im10;
    // 2 i conj(zeta) r11 with conj(zeta) = f + i gamma
    const double re01d = -h * (im11 - im00) + (-2.0 * p.gamma * re11 - 2.0 * p.f * im11) + 2.0 * p.f * im00 +
                         p.omega0 * im01 - 4.0 * p.D * re01;
    const double im01d = h * (re11 - re00) + (-2.0 * p.gamma * im11 + 2.0 * p.f * re11) - 2.0 * p.f * re00 -
                         p.omega0 * re01 - 4.0 * p.D * im01;
    d[2] = re01d;
    d[3] = im01d;
    d[4] = re01d;
    d[5] = -im01d;
    return d;
}

// Classical noise: -i[H0, rho] - (alpha/2)[sz, [sz, rho]], H0 = (w0/2) sz - (delta0/2) sx.
inline State deriv_noise(const State& x, const Params& p) {
    // rho as 2x2 real/imag parts
    const double r[2][2] = {{x[0], x[2]}, {x[4], x[6]}};
    const double i[2][2] = {{x[1], x[3]}, {x[5], x[7]}};
    const double H[2][2] = {{0.5 * p.omega0, -0.5 * p.delta0}, {-0.5 * p.delta0, -0.5 * p.omega0}};
    const double sz[2] = {1.0, -1.0};
    State d{};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            // C = H rho - rho H (H real symmetric)
            double cr = 0.0, ci = 0.0;
            for (int k = 0; k < 2; ++k) {
                cr += H[a][k] * r[k][b] - r[a][k] * H[k][b];
                ci += H[a][k] * i[k][b] - i[a][k] * H[k][b];
            }
            // -i C
            double dr = ci;
            double di = -cr;
            // [sz,[sz,rho]]_ab = (sz_a - sz_b)^2 rho_ab
            const double w = (sz[a] - sz[b]) * (sz[a] - sz[b]);
            dr -= 0.5 * p.alpha * w * r[a][b];
            di -= 0.5 * p.alpha * w * i[a][b];
            d[4 * a + 2 * b] = dr;
            d[4 * a + 2 * b + 1] = di;
        }
    }
    return d;
}

inline Matrix generator(const std::function<State(const State&)>& deriv) {
    Matrix g{};
    for (std::size_t c = 0; c < 8; ++c) {
        State e{};
        e[c] = 1.0;
        const State col = deriv(e);
        for (std::size_t r = 0; r < 8; ++r) g[r][c] = col[r];
    }
    return g;
}

inline Matrix mul(const Matrix& a, const Matrix& b) {
    Matrix c{};
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t k = 0; k < 8; ++k)
            for (std::size_t j = 0; j < 8; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

// exp(G h) by Taylor series; only used with |G| h well below 1.
inline Matrix propagator(const Matrix& g, double h, int terms = 30) {
    Matrix result{}, term{};
    for (std::size_t i = 0; i < 8; ++i) result[i][i] = term[i][i] = 1.0;
    Matrix gh = g;
    for (auto& row : gh)
        for (auto& v : row) v *= h;
    for (int n = 1; n <= terms; ++n) {
        term = mul(term, gh);
        for (auto& row : term)
            for (auto& v : row) v /= n;
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) result[i][j] += term[i][j];
    }
    return result;
}

struct Run {
    std::vector<double> t;
    std::vector<State> x;
};

// n steps of t_end/n from the equal superposition, storing every `stride`
// steps and at the end.
inline Run evolve(const std::function<State(const State&)>& deriv, double t_end, std::size_t n, std::size_t stride) {
    const double h = t_end / static_cast<double>(n);
    const Matrix P = propagator(generator(deriv), h);
    State x{0.5, 0.0, 0.5, 0.0, 0.5, 0.0, 0.5, 0.0};
    Run run;
    run.t.push_back(0.0);
    run.x.push_back(x);
    for (std::size_t k = 1; k <= n; ++k) {
        State y{};
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) y[i] += P[i][j] * x[j];
        x = y;
        if (k % stride == 0 || k == n) {
            run.t.push_back(k == n ? t_end : static_cast<double>(k) * h);
            run.x.push_back(x);
        }
    }
    return run;
}

}  // namespace oracle
