// quadrature.hpp - Gauss-Legendre rules and panel meshes used by the integrators

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "leezeno/error.hpp"

namespace leezeno::quad {

struct Rule {
    std::vector<double> nodes;   // ascending, on [-1, 1]
    std::vector<double> weights;
};

// Roots of P_n by Newton iteration on the three-term recurrence.
inline Rule gauss_legendre(std::size_t n) {
    if (n == 0) fail(Errc::InvalidArgument, "gauss_legendre needs at least one node");
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
        double deriv = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                const double dj = static_cast<double>(j);
                p1 = ((2.0 * dj - 1.0) * z * p2 - (dj - 1.0) * p3) / dj;
            }
            deriv = dn * (z * p1 - p2) / (z * z - 1.0);
            const double step = p1 / deriv;
            z -= step;
            if (std::abs(step) < 1e-16) break;
        }
        // one more derivative evaluation at the converged root
        double p1 = 1.0;
        double p2 = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            const double p3 = p2;
            p2 = p1;
            const double dj = static_cast<double>(j);
            p1 = ((2.0 * dj - 1.0) * z * p2 - (dj - 1.0) * p3) / dj;
        }
        deriv = dn * (z * p1 - p2) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * deriv * deriv);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

// Cached low-order rules; initialised once, read-only afterwards.
template <std::size_t N>
const Rule& fixed_rule() {
    static const Rule rule = gauss_legendre(N);
    return rule;
}

// Integrate f over [a, b] with an n-point rule.
template <class F>
auto integrate(const Rule& rule, double a, double b, F&& f) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    decltype(f(mid)) sum{};
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
    return sum * half;
}

// Composite rule over consecutive breakpoints.
template <class F>
auto integrate_panels(const Rule& rule, const std::vector<double>& breaks, F&& f) {
    decltype(f(breaks.front())) sum{};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        sum += integrate(rule, breaks[i], breaks[i + 1], f);
    return sum;
}

struct Feature {
    double center;
    double min_width;
};

// Breakpoints on [lo, hi] whose spacing is min_width next to each feature centre,
// grows linearly with the distance to it (slope `growth`) and never exceeds max_width.
inline std::vector<double> graded_breakpoints(double lo, double hi, const std::vector<Feature>& features,
                                              double max_width, double growth = 0.25) {
    if (!(hi > lo)) fail(Errc::InvalidArgument, "graded_breakpoints needs lo < hi");
    std::vector<double> centers;
    for (const auto& f : features)
        if (f.center > lo && f.center < hi) centers.push_back(f.center);
    std::sort(centers.begin(), centers.end());

    auto width_at = [&](double x) {
        double w = max_width;
        for (const auto& f : features)
            w = std::min(w, std::max(f.min_width, 1e-300) + growth * std::abs(x - f.center));
        return w;
    };

    std::vector<double> breaks{lo};
    double x = lo;
    auto next_center = centers.begin();
    while (x < hi) {
        double step = width_at(x);
        // do not march past the next feature in one step; land on it instead
        double next = x + step;
        // width is evaluated at the left edge, shrink when approaching a feature
        while (width_at(next) < 0.5 * step) {
            step *= 0.5;
            next = x + step;
        }
        while (next_center != centers.end() && *next_center <= x) ++next_center;
        if (next_center != centers.end() && *next_center < next) next = *next_center;
        if (next >= hi || hi - next < 1e-12 * (hi - lo)) next = hi;
        breaks.push_back(next);
        x = next;
    }
    return breaks;
}

} // namespace leezeno::quad
