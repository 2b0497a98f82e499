// self_energy.hpp - Self-energy Sigma_a(E) on the physical sheet, its continuation through the cut,
// derivatives and the large-|E| asymptote

#pragma once

#include <cmath>
#include <complex>
#include <variant>

#include "leezeno/error.hpp"
#include "leezeno/form_factor.hpp"
#include "leezeno/quadrature.hpp"
#include "leezeno/spectral.hpp"

namespace leezeno {

enum class Sheet { First, Second };

// Which side of the cut a real energy is approached from.
enum class Side { Above, Below };

struct SheetedEnergy {
    cplx energy;
    Sheet sheet{Sheet::First};
};

struct SigmaEval {
    cplx value;
    cplx derivative;  // dSigma/dE
    Sheet sheet{Sheet::First};
};

namespace detail {

inline cplx log_side(cplx z, Side side) {
    if (z.imag() == 0.0 && z.real() < 0.0) return {std::log(-z.real()), side == Side::Above ? pi : -pi};
    return std::log(z);
}

// Cauchy transform int p(w) / (E - w) dw of the piecewise cubic and its E-derivative.
// Pieces close to E are integrated in closed form; distant ones by Gauss-Legendre,
// with the order chosen from the distance-to-width ratio.
inline SigmaEval tabulated_cauchy(const Tabulated& f, cplx E, Side side) {
    const auto pieces = f.pieces();
    // On the real axis at a sample point the log and pole terms of the two neighbouring
    // pieces are singular with opposite signs; they cancel and are dropped.
    const bool on_axis = E.imag() == 0.0;
    if (on_axis && ((E.real() == f.lower() && f.g2().front() != 0.0) || (E.real() == f.upper() && f.g2().back() != 0.0)))
        fail(Errc::InvalidArgument, "self-energy diverges at an end of the table where the density is nonzero");
    cplx value = 0.0;
    cplx deriv = 0.0;
    for (const auto& p : pieces) {
        const cplx e = E - p.mid;
        const double h = p.width;
        const double ratio = std::abs(e) / h;
        if (ratio > 4.0) {
            const quad::Rule& rule = ratio > 64.0  ? quad::fixed_rule<3>()
                                     : ratio > 8.0 ? quad::fixed_rule<6>()
                                                   : quad::fixed_rule<10>();
            const double half = 0.5 * h;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                const double w = p.mid + half * rule.nodes[k];
                const cplx inv = 1.0 / (E - w);
                const double g = rule.weights[k] * half * p.value(w);
                value += g * inv;
                deriv -= g * inv * inv;
            }
            continue;
        }
        const auto& a = p.coef;
        const bool at_lo = on_axis && E.real() == p.lo;
        const bool at_hi = on_axis && E.real() == p.hi;
        const cplx pe = a[0] + e * (a[1] + e * (a[2] + e * a[3]));
        const cplx dpe = a[1] + e * (2.0 * a[2] + 3.0 * a[3] * e);
        const cplx log_ratio = (at_lo ? cplx(0.0) : log_side(E - p.lo, side)) - (at_hi ? cplx(0.0) : log_side(E - p.hi, side));
        const cplx int_q = h * (a[1] + a[2] * e + a[3] * (h * h / 12.0 + e * e));
        value += pe * log_ratio - int_q;
        const cplx inv_diff = (at_hi ? cplx(0.0) : 1.0 / (E - p.hi)) - (at_lo ? cplx(0.0) : 1.0 / (E - p.lo));
        deriv -= pe * inv_diff - dpe * log_ratio + (a[2] + 2.0 * a[3] * e) * h;
    }
    return {value, deriv, Sheet::First};
}

inline bool on_cut(const FormFactor& ff, cplx E) {
    if (E.imag() != 0.0) return false;
    if (std::holds_alternative<Dirac>(ff)) return false;
    if (const auto* f = std::get_if<FlatBand>(&ff)) return f->rate > 0.0;
    return support(ff).contains(E.real());
}

} // namespace detail

/// Sigma_a(E) = int g^2(w) / (E - w) dw on the physical sheet.
inline SigmaEval sigma_first(const FormFactor& ff, cplx E) {
    if (detail::on_cut(ff, E))
        fail(Errc::OnCutAmbiguous, "energy lies on the branch cut; use sigma_boundary with a side");
    return std::visit(
        overloaded{
            [&](const Lorentzian& f) {
                const double l2 = f.coupling * f.coupling;
                const cplx den = E.imag() > 0.0 ? E + cplx(0.0, f.bandwidth) : E - cplx(0.0, f.bandwidth);
                return SigmaEval{l2 / den, -l2 / (den * den), Sheet::First};
            },
            [&](const FlatBand& f) {
                const double s = E.imag() > 0.0 ? -0.5 : 0.5;
                return SigmaEval{cplx(0.0, s * f.rate), 0.0, Sheet::First};
            },
            [&](const Dirac& f) {
                const cplx d = E - f.location;
                if (d == 0.0) fail(Errc::AtPole, "self-energy of a discrete level is singular at its energy");
                const double l2 = f.coupling * f.coupling;
                return SigmaEval{l2 / d, -l2 / (d * d), Sheet::First};
            },
            [&](const Tabulated& f) { return detail::tabulated_cauchy(f, E, Side::Above); },
        },
        ff);
}

/// Boundary value Sigma_a(w +- i0) for real w.
inline SigmaEval sigma_boundary(const FormFactor& ff, double w, Side side) {
    const double sgn = side == Side::Above ? 1.0 : -1.0;
    return std::visit(
        overloaded{
            [&](const Lorentzian& f) {
                const double l2 = f.coupling * f.coupling;
                const cplx den = cplx(w, sgn * f.bandwidth);
                return SigmaEval{l2 / den, -l2 / (den * den), Sheet::First};
            },
            [&](const FlatBand& f) { return SigmaEval{cplx(0.0, -0.5 * sgn * f.rate), 0.0, Sheet::First}; },
            [&](const Dirac&) { return sigma_first(ff, cplx(w, 0.0)); },
            [&](const Tabulated& f) { return detail::tabulated_cauchy(f, cplx(w, 0.0), side); },
        },
        ff);
}

/// Continuation of Sigma_a from the upper half plane through the cut into Im E <= 0:
/// Sigma_II(E) = Sigma_I(E) - 2 pi i g^2(E), with g^2 continued analytically.
inline SigmaEval sigma_second(const FormFactor& ff, cplx E) {
    if (E.imag() > 0.0) fail(Errc::InvalidArgument, "second-sheet evaluation requires Im E <= 0");
    return std::visit(
        overloaded{
            [&](const Lorentzian& f) {
                const double l2 = f.coupling * f.coupling;
                const cplx den = E + cplx(0.0, f.bandwidth);
                if (den == 0.0) fail(Errc::AtPole, "second-sheet self-energy is singular at -i Lambda");
                return SigmaEval{l2 / den, -l2 / (den * den), Sheet::Second};
            },
            [&](const FlatBand& f) { return SigmaEval{cplx(0.0, -0.5 * f.rate), 0.0, Sheet::Second}; },
            [&](const Dirac&) -> SigmaEval {
                fail(Errc::NoBranchCut, "a discrete spectrum has no second sheet");
            },
            [&](const Tabulated& f) {
                const double w = E.real();
                if (!(w > f.lower() && w < f.upper()))
                    fail(Errc::ContinuationUnreliable, "energy is outside the tabulated continuum");
                if (E.imag() == 0.0) {
                    auto s = detail::tabulated_cauchy(f, E, Side::Below);
                    const auto& p = f.pieces()[f.piece_index(w)];
                    s.value -= cplx(0.0, 2.0 * pi) * p.value(w);
                    s.derivative -= cplx(0.0, 2.0 * pi) * p.slope(w);
                    s.sheet = Sheet::Second;
                    return s;
                }
                const auto fit = f.continuation_at(w, -E.imag());
                if (fit.near_edge || std::abs(E - fit.center) > fit.radius)
                    fail(Errc::ContinuationUnreliable, "energy is beyond the trusted continuation radius");
                if (fit.defect > Tabulated::kFitDefect)
                    fail(Errc::ContinuationUnreliable, "local fit disagrees with the interpolated density; sampling too coarse");
                auto s = detail::tabulated_cauchy(f, E, Side::Below);
                s.value -= cplx(0.0, 2.0 * pi) * fit.value(E);
                s.derivative -= cplx(0.0, 2.0 * pi) * fit.derivative(E);
                s.sheet = Sheet::Second;
                return s;
            },
        },
        ff);
}

/// The function whose zeros are resonance poles: physical sheet above the real axis,
/// boundary value from above on it and the second sheet below it.
inline SigmaEval sigma_continued(const FormFactor& ff, cplx E) {
    if (E.imag() > 0.0 || std::holds_alternative<Dirac>(ff)) return sigma_first(ff, E);
    if (E.imag() == 0.0) {
        if (!detail::on_cut(ff, E)) return sigma_first(ff, E);
        return sigma_boundary(ff, E.real(), Side::Above);
    }
    if (const auto* f = std::get_if<Tabulated>(&ff); f && !(E.real() > f->lower() && E.real() < f->upper()))
        return sigma_first(ff, E);  // below the real axis but away from the cut: no continuation needed
    return sigma_second(ff, E);
}

struct SigmaAsymptote {
    cplx leading;      // 1 / (tau_Z^2 E)
    double deviation;  // |Sigma(E) tau_Z^2 E - 1|
};

inline SigmaAsymptote sigma_asymptote(const FormFactor& ff, cplx E) {
    const double m = total_coupling(ff);
    if (m <= 0.0) fail(Errc::InvalidArgument, "decoupled form factor has no asymptote");
    if (const auto* d = std::get_if<Dirac>(&ff)) return {m / E, std::abs(d->location / (E - d->location))};
    const cplx s = sigma_first(ff, E).value;
    return {m / E, std::abs(s * E / m - 1.0)};
}

} // namespace leezeno
