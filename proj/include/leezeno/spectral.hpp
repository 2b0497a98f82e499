// spectral.hpp - Model-level scalars of a form factor: density, Zeno time, golden rule, level shift

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>
#include <vector>

#include "leezeno/error.hpp"
#include "leezeno/form_factor.hpp"
#include "leezeno/quadrature.hpp"

namespace leezeno {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// g^2(w). Outside the support the density is 0 by convention.
inline double eval_density(const FormFactor& ff, double w) {
    return std::visit(
        overloaded{
            [&](const Lorentzian& f) {
                return f.coupling * f.coupling * f.bandwidth / (pi * (w * w + f.bandwidth * f.bandwidth));
            },
            [&](const FlatBand& f) { return f.rate / (2.0 * pi); },
            [&](const Dirac&) -> double {
                fail(Errc::DensityNotPointwise, "a delta measure has no pointwise density");
            },
            [&](const Tabulated& f) { return f(w); },
        },
        ff);
}

/// Limit of g^2 at +-infinity; nonzero only for a flat band.
inline double tail_density(const FormFactor& ff) {
    if (const auto* f = std::get_if<FlatBand>(&ff)) return f->rate / (2.0 * pi);
    return 0.0;
}

/// Integral of g^2 over the real line, equal to <a|H_int^2|a>.
inline double total_coupling(const FormFactor& ff) {
    return std::visit(
        overloaded{
            [](const Lorentzian& f) { return f.coupling * f.coupling; },
            [](const FlatBand& f) -> double {
                if (f.rate == 0.0) return 0.0;
                fail(Errc::SecondMomentDivergent, "flat band density is not integrable");
            },
            [](const Dirac& f) { return f.coupling * f.coupling; },
            [](const Tabulated& f) { return f.integral(); },
        },
        ff);
}

/// tau_Z = (integral of g^2)^(-1/2). Infinite for a decoupled state.
inline double zeno_time(const FormFactor& ff) {
    const double m = total_coupling(ff);
    if (m <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / std::sqrt(m);
}

/// Mean energy of the continuum, integral of w g^2 over integral of g^2.
inline double first_moment(const FormFactor& ff) {
    return std::visit(
        overloaded{
            [](const Lorentzian&) { return 0.0; },  // symmetric about the peak
            [](const FlatBand&) -> double {
                fail(Errc::SecondMomentDivergent, "flat band has no finite mean energy");
            },
            [](const Dirac& f) { return f.location; },
            [](const Tabulated& f) {
                const double m = f.integral();
                if (m <= 0.0) fail(Errc::InvalidArgument, "tabulated density vanishes identically");
                return f.first_moment() / m;
            },
        },
        ff);
}

/// Characteristic width of the form factor, used to scale default grids.
inline double bandwidth_scale(const FormFactor& ff) {
    return std::visit(
        overloaded{
            [](const Lorentzian& f) { return f.bandwidth; },
            [](const FlatBand&) { return 1.0; },
            [](const Dirac& f) { return f.coupling > 0.0 ? f.coupling : 1.0; },
            [](const Tabulated& f) {
                const auto& rule = quad::fixed_rule<3>();
                const double mass = f.integral();
                if (mass <= 0.0) return f.upper() - f.lower();
                const double mean = f.first_moment() / mass;
                double var = 0.0;
                for (const auto& p : f.pieces())
                    var += quad::integrate(rule, p.lo, p.hi,
                                           [&](double w) { return (w - mean) * (w - mean) * p.value(w); });
                return std::sqrt(std::max(var / mass, 0.0));
            },
        },
        ff);
}

/// Fermi golden rule rate 2 pi g^2(omega_a).
inline double golden_rule(const LeeModel& model) {
    if (std::holds_alternative<Dirac>(model.ff))
        fail(Errc::GoldenRuleUndefined, "golden rule needs a continuous density");
    return 2.0 * pi * eval_density(model.ff, model.omega_a);
}

namespace detail {

// P int g^2(w)/(x - w) dw via the symmetric pair g^2(x-u) - g^2(x+u) over u > 0,
// with panel edges on every interpolation node so each panel sees a single cubic.
inline double tabulated_principal_value(const Tabulated& f, double x) {
    if (!(x > f.lower() && x < f.upper()))
        fail(Errc::PrincipalValueUnresolvable, "tabulated grid does not bracket the evaluation point");
    const auto omega = f.omega();
    std::vector<double> breaks;
    breaks.reserve(omega.size() + 1);
    breaks.push_back(0.0);
    for (double w : omega) {
        const double u = std::abs(w - x);
        if (u > 0.0) breaks.push_back(u);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const auto& rule = quad::fixed_rule<8>();
    return quad::integrate_panels(rule, breaks, [&](double u) { return (f(x - u) - f(x + u)) / u; });
}

} // namespace detail

/// Second-order level shift P int g^2(w) / (omega_a - w) dw.
inline double second_order_shift(const LeeModel& model) {
    const double x = model.omega_a;
    if (!std::isfinite(x)) fail(Errc::InvalidArgument, "omega_a must be finite");
    return std::visit(
        overloaded{
            [&](const Lorentzian& f) {
                return f.coupling * f.coupling * x / (x * x + f.bandwidth * f.bandwidth);
            },
            [](const FlatBand&) { return 0.0; },
            [&](const Dirac& f) {
                if (x == f.location) fail(Errc::AtPole, "omega_a sits on the discrete level");
                return f.coupling * f.coupling / (x - f.location);
            },
            [&](const Tabulated& f) { return detail::tabulated_principal_value(f, x); },
        },
        model.ff);
}

} // namespace leezeno
