#include "sbnoise/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace sbnoise::quad {

namespace {

using GK = GaussKronrod15;

// Kronrod weight and Gauss weight (0 when the node is not a Gauss node) for
// node index k in [0, 8).
constexpr double gauss_weight_at(std::size_t k) {
    if (k % 2 == 0) return 0.0;
    return GK::gauss_weights[k / 2];
}

struct Panel {
    double a;
    double b;
    Estimate est;

    bool operator<(const Panel& o) const { return est.error < o.est.error; }
};

}  // namespace

CompositeRule composite_rule(std::span<const double> edges) {
    CompositeRule rule;
    if (edges.size() < 2) return rule;
    const std::size_t panels = edges.size() - 1;
    rule.nodes.reserve(panels * GK::size);
    rule.kronrod.reserve(panels * GK::size);
    rule.gauss.reserve(panels * GK::size);
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = edges[p];
        const double b = edges[p + 1];
        if (!(b > a)) throw std::invalid_argument("quadrature panel edges must be strictly increasing");
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (std::size_t k = 0; k < 7; ++k) {
            rule.nodes.push_back(mid - half * GK::nodes[k]);
            rule.kronrod.push_back(half * GK::kronrod_weights[k]);
            rule.gauss.push_back(half * gauss_weight_at(k));
        }
        rule.nodes.push_back(mid);
        rule.kronrod.push_back(half * GK::kronrod_weights[7]);
        rule.gauss.push_back(half * gauss_weight_at(7));
        for (std::size_t k = 7; k-- > 0;) {
            rule.nodes.push_back(mid + half * GK::nodes[k]);
            rule.kronrod.push_back(half * GK::kronrod_weights[k]);
            rule.gauss.push_back(half * gauss_weight_at(k));
        }
    }
    return rule;
}

std::vector<double> uniform_edges(double a, double b, std::size_t count) {
    if (count == 0) throw std::invalid_argument("panel count must be positive");
    std::vector<double> edges(count + 1);
    const double h = (b - a) / static_cast<double>(count);
    for (std::size_t i = 0; i <= count; ++i) edges[i] = a + h * static_cast<double>(i);
    edges.back() = b;
    return edges;
}

Estimate apply(const CompositeRule& rule, std::span<const double> values) {
    // Error is accumulated per panel so that cancellation between panels does
    // not hide local inaccuracy.
    Estimate est;
    for (std::size_t start = 0; start < rule.size(); start += GK::size) {
        double k = 0.0;
        double g = 0.0;
        double a = 0.0;
        for (std::size_t i = start; i < start + GK::size; ++i) {
            k += rule.kronrod[i] * values[i];
            g += rule.gauss[i] * values[i];
            a += rule.kronrod[i] * std::abs(values[i]);
        }
        est.value += k;
        est.error += std::abs(k - g);
        est.abs_value += a;
    }
    return est;
}

Estimate gk15(const std::function<double(double)>& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double fc = f(mid);
    double k = GK::kronrod_weights[7] * fc;
    double g = GK::gauss_weights[3] * fc;
    double abs_k = GK::kronrod_weights[7] * std::abs(fc);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * GK::nodes[j];
        const double f1 = f(mid - dx);
        const double f2 = f(mid + dx);
        k += GK::kronrod_weights[j] * (f1 + f2);
        g += gauss_weight_at(j) * (f1 + f2);
        abs_k += GK::kronrod_weights[j] * (std::abs(f1) + std::abs(f2));
    }
    return {k * half, std::abs((k - g) * half), abs_k * std::abs(half)};
}

Estimate integrate_panels(const std::function<double(double)>& f, std::span<const double> edges) {
    Estimate total;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) total += gk15(f, edges[p], edges[p + 1]);
    return total;
}

Estimate integrate_adaptive(const std::function<double(double)>& f, std::span<const double> edges, double rel_tol,
                            double abs_tol, std::size_t max_panels) {
    std::priority_queue<Panel> heap;
    Estimate total;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        Panel panel{edges[p], edges[p + 1], gk15(f, edges[p], edges[p + 1])};
        total += panel.est;
        heap.push(panel);
    }
    while (!heap.empty() && heap.size() < max_panels && total.error > std::max(abs_tol, rel_tol * total.abs_value)) {
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        Panel left{worst.a, mid, gk15(f, worst.a, mid)};
        Panel right{mid, worst.b, gk15(f, mid, worst.b)};
        total.value += left.est.value + right.est.value - worst.est.value;
        total.abs_value += left.est.abs_value + right.est.abs_value - worst.est.abs_value;
        total.error += left.est.error + right.est.error - worst.est.error;
        heap.push(left);
        heap.push(right);
    }
    // Final re-summation so that incremental updates cannot drift.
    Estimate resummed;
    while (!heap.empty()) {
        resummed += heap.top().est;
        heap.pop();
    }
    return resummed;
}

}  // namespace sbnoise::quad
