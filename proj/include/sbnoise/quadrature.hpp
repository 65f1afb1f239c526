// quadrature.hpp - panel-wise Gauss-Kronrod (7/15) integration.

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sbnoise::quad {

/// Integral estimate with its error estimate and the integral of |f|
/// (the scale against which relative tolerances are measured).
struct Estimate {
    double value{0.0};
    double error{0.0};
    double abs_value{0.0};

    Estimate& operator+=(const Estimate& o) {
        value += o.value;
        error += o.error;
        abs_value += o.abs_value;
        return *this;
    }
};

/// 15-point Kronrod extension of the 7-point Gauss-Legendre rule on [-1, 1].
/// Nodes are listed for x >= 0 (descending); the Gauss nodes are the odd
/// Kronrod indices 1, 3, 5, 7 (with 7 the centre).
struct GaussKronrod15 {
    static constexpr std::array<double, 8> nodes{
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr std::array<double, 8> kronrod_weights{
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr std::array<double, 4> gauss_weights{
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    static constexpr std::size_t size = 15;
};

/// Nodes and the Kronrod/Gauss weights of a composite GK15 rule, flattened so
/// that an integrand can be tabulated once and reused against many kernels.
struct CompositeRule {
    std::vector<double> nodes;
    std::vector<double> kronrod;  // full-rule weights
    std::vector<double> gauss;    // embedded 7-point weights, zero off the Gauss nodes

    [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

/// Composite rule over the panels delimited by `edges` (strictly increasing).
[[nodiscard]] CompositeRule composite_rule(std::span<const double> edges);

/// `count` equal panels on [a, b].
[[nodiscard]] std::vector<double> uniform_edges(double a, double b, std::size_t count);

/// Applies a composite rule to tabulated values f(nodes[i]).
[[nodiscard]] Estimate apply(const CompositeRule& rule, std::span<const double> values);

/// GK15 on a single panel.
[[nodiscard]] Estimate gk15(const std::function<double(double)>& f, double a, double b);

/// Sum of GK15 over fixed panels.
[[nodiscard]] Estimate integrate_panels(const std::function<double(double)>& f, std::span<const double> edges);

/// Globally adaptive bisection starting from the given panels: the panel with
/// the largest error estimate is split until the total error is at most
/// max(abs_tol, rel_tol * integral of |f|) or `max_panels` is reached. The
/// returned estimate carries the final error; callers decide on convergence.
[[nodiscard]] Estimate integrate_adaptive(const std::function<double(double)>& f, std::span<const double> edges,
                                          double rel_tol, double abs_tol, std::size_t max_panels);

}  // namespace sbnoise::quad
