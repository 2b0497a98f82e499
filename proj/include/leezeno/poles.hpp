// poles.hpp - Resolvent, resonance poles on the second sheet, residues and the
// closed-form two-pole (Lorentzian) solution

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "leezeno/error.hpp"
#include "leezeno/form_factor.hpp"
#include "leezeno/self_energy.hpp"
#include "leezeno/spectral.hpp"

namespace leezeno {

/// G_a(E) = 1 / (E - omega_a - Sigma(E)) with Sigma taken on the requested sheet.
inline cplx resolvent(const LeeModel& model, SheetedEnergy at) {
    const SigmaEval s = at.sheet == Sheet::First ? sigma_first(model.ff, at.energy) : sigma_second(model.ff, at.energy);
    const cplx den = at.energy - model.omega_a - s.value;
    if (std::abs(den) < 1e-14) fail(Errc::AtPole, "resolvent evaluated at a pole");
    return 1.0 / den;
}

struct PoleData {
    cplx energy;          // E_pole
    double shift{};       // Re E_pole - omega_a
    double width{};       // gamma = -2 Im E_pole
    cplx residue;         // 1 - R = 1 / (1 - Sigma'(E_pole))
    double renormalization{};  // Z = |residue|^2
    int iterations{};
};

struct PoleSearchOptions {
    int max_iterations{100};
    double seed_offset{1e-6};   // seed = omega_a + Sigma_II(omega_a - i seed_offset)
    double tolerance{1e-12};    // on |f(E)| relative to max(1, |E|)
    double measurement_rate{0.0};  // Gamma: evaluate Sigma at E + i Gamma / 2
};

namespace detail {

using SigmaFn = std::function<SigmaEval(cplx)>;

// Near a double root f = E - omega_a - Sigma cannot resolve the root below sqrt(eps); the
// root of f' = 1 - Sigma' is simple there and is located instead, with Sigma'' by central
// differences of the analytic Sigma'.
inline cplx polish_double_root(double omega_a, const SigmaFn& sigma, cplx e) {
    auto residual = [&](cplx z) { return std::abs(z - omega_a - sigma(z).value); };
    cplx z = e;
    for (int it = 0; it < 50; ++it) {
        const double h = 1e-4 * std::max(1.0, std::abs(z));
        const cplx g = 1.0 - sigma(z).derivative;
        const cplx dg = -(sigma(z + h).derivative - sigma(z - h).derivative) / (2.0 * h);
        if (!(std::abs(dg) > 0.0)) break;
        const cplx step = g / dg;
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return e;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    return residual(z) <= residual(e) ? z : e;
}

inline std::optional<PoleData> newton_pole(double omega_a, const SigmaFn& sigma, cplx seed,
                                           const PoleSearchOptions& opt) {
    cplx e = seed;
    for (int it = 0; it < opt.max_iterations; ++it) {
        const SigmaEval s = sigma(e);
        const cplx f = e - omega_a - s.value;
        if (std::abs(f) < opt.tolerance * std::max(1.0, std::abs(e))) {
            // one polishing step; quadratic convergence makes it free accuracy
            const cplx fp = 1.0 - s.derivative;
            if (std::abs(fp) > 0.0) {
                const cplx e2 = e - f / fp;
                const SigmaEval s2 = sigma(e2);
                if (std::abs(e2 - omega_a - s2.value) <= std::abs(f)) e = e2;
            }
            if (std::abs(1.0 - sigma(e).derivative) < 1e-3) e = polish_double_root(omega_a, sigma, e);
            const SigmaEval sp = sigma(e);
            PoleData p;
            p.energy = e;
            p.shift = e.real() - omega_a;
            p.width = -2.0 * e.imag();
            const cplx fp_pole = 1.0 - sp.derivative;
            // a double pole has no finite residue
            p.residue = fp_pole == 0.0 ? cplx(std::numeric_limits<double>::infinity(), 0.0) : 1.0 / fp_pole;
            p.renormalization = std::norm(p.residue);
            p.iterations = it;
            return p;
        }
        const cplx fp = 1.0 - s.derivative;
        if (!(std::abs(fp) > 0.0) || !std::isfinite(std::abs(fp))) return std::nullopt;
        e -= f / fp;
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return std::nullopt;
    }
    return std::nullopt;
}

inline PoleData solve_pole(double omega_a, const SigmaFn& sigma, const PoleSearchOptions& opt) {
    const cplx seed = omega_a + sigma(cplx(omega_a, -opt.seed_offset)).value;
    auto pole = newton_pole(omega_a, sigma, seed, opt);
    if (!pole) {
        // a seed on a symmetry axis can stall Newton between two mirror poles
        const double nudge = 1e-3 * (1.0 + std::abs(seed));
        pole = newton_pole(omega_a, sigma, seed + nudge, opt);
    }
    if (!pole) fail(Errc::PoleNotFound, "Newton iteration did not converge");
    if (pole->energy.imag() > 0.0) fail(Errc::NotADecayPole, "converged root lies in the upper half plane");
    return *pole;
}

inline SigmaFn measured_sigma(const FormFactor& ff, double measurement_rate) {
    const cplx lift(0.0, 0.5 * measurement_rate);
    return [&ff, lift](cplx e) { return sigma_continued(ff, e + lift); };
}

} // namespace detail

/// Dominant resonance pole E_pole - omega_a - Sigma_II(E_pole) = 0 by Newton iteration.
inline PoleData find_pole(const LeeModel& model, const PoleSearchOptions& opt = {}) {
    if (std::holds_alternative<Dirac>(model.ff))
        fail(Errc::NoBranchCut, "a discrete level coupled to a discrete level has no resonance pole");
    if (!(model.omega_a > threshold(model.ff)))
        fail(Errc::InvalidArgument, "omega_a must lie above the spectral threshold");
    return detail::solve_pole(model.omega_a, detail::measured_sigma(model.ff, opt.measurement_rate), opt);
}

struct ScanRegion {
    double re_lo, re_hi, im_lo, im_hi;
    int points_per_side{12};
};

/// Every pole reachable by Newton from a grid of seeds in the region, deduplicated at 1e-8
/// and ordered from the real axis downwards.
inline std::vector<PoleData> scan_poles(const LeeModel& model, const ScanRegion& region,
                                        const PoleSearchOptions& opt = {}) {
    if (region.points_per_side < 1) fail(Errc::InvalidArgument, "scan needs at least one seed per side");
    const auto sigma = detail::measured_sigma(model.ff, opt.measurement_rate);
    std::vector<PoleData> found;
    const int n = region.points_per_side;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double fx = n == 1 ? 0.5 : static_cast<double>(i) / (n - 1);
            const double fy = n == 1 ? 0.5 : static_cast<double>(j) / (n - 1);
            const cplx seed(region.re_lo + fx * (region.re_hi - region.re_lo),
                            region.im_lo + fy * (region.im_hi - region.im_lo));
            std::optional<PoleData> p;
            try {
                p = detail::newton_pole(model.omega_a, sigma, seed, opt);
            } catch (const Error&) {
                continue;  // seed wandered where the continuation is not available
            }
            if (!p || p->energy.imag() > 0.0) continue;
            const bool dup = std::any_of(found.begin(), found.end(),
                                         [&](const PoleData& q) { return std::abs(q.energy - p->energy) < 1e-8; });
            if (!dup) found.push_back(*p);
        }
    }
    std::sort(found.begin(), found.end(), [](const PoleData& a, const PoleData& b) {
        if (a.energy.imag() != b.energy.imag()) return a.energy.imag() > b.energy.imag();
        return a.energy.real() < b.energy.real();
    });
    return found;
}

/// Exact pole structure of the Lorentzian model, G_a(E) = (E + i Lambda) / ((E - omega_a)(E + i Lambda) - lambda^2).
struct TwoPoleParams {
    double coupling{};    // lambda
    double bandwidth{};   // Lambda
    double omega_a{};
    double upsilon2{};    // omega_a^2 + 4 lambda^2 - Lambda^2, may be negative
    cplx e1;              // dominant pole omega_a + shift - i width / 2
    cplx e2;              // -shift - i (Lambda - width / 2)
    double shift{};
    double width{};
    cplx r;               // weight of the e2 exponential; 1 - r is the residue at e1
    double z{};           // |1 - r|^2
};

inline TwoPoleParams two_pole_closed(double coupling, double bandwidth, double omega_a) {
    if (!(coupling > 0.0) || !(bandwidth > 0.0) || !std::isfinite(omega_a))
        fail(Errc::InvalidArgument, "two-pole model needs lambda > 0, Lambda > 0 and finite omega_a");
    TwoPoleParams p;
    p.coupling = coupling;
    p.bandwidth = bandwidth;
    p.omega_a = omega_a;
    p.upsilon2 = omega_a * omega_a + 4.0 * coupling * coupling - bandwidth * bandwidth;
    // E^2 - (omega_a - i Lambda) E - (lambda^2 + i Lambda omega_a) = 0; root of the
    // discriminant taken with Im >= 0 so that e1 is the pole nearer the real axis
    cplx s = std::sqrt(cplx(p.upsilon2, 2.0 * bandwidth * omega_a));
    if (s.imag() < 0.0 || (s.imag() == 0.0 && s.real() < 0.0)) s = -s;
    const cplx trace(omega_a, -bandwidth);
    const cplx constant(-coupling * coupling, -bandwidth * omega_a);
    p.e2 = 0.5 * (trace - s);
    p.e1 = constant / p.e2;  // product of the roots; avoids cancellation in e1
    p.shift = p.e1.real() - omega_a;
    p.width = -2.0 * p.e1.imag();
    if (p.e1 == p.e2) {
        // exceptional point (upsilon^2 = 0, omega_a = 0): a double pole, the residues diverge
        p.r = cplx(-std::numeric_limits<double>::infinity(), 0.0);
        p.z = std::numeric_limits<double>::infinity();
        return p;
    }
    const cplx residue = (p.e1 + cplx(0.0, bandwidth)) / (p.e1 - p.e2);
    p.r = 1.0 - residue;
    p.z = std::norm(residue);
    return p;
}

struct ShiftWidth {
    double shift;
    double width;
};

/// The shift and width written as the nested radicals in upsilon^2; omega_a = 0 is taken as a limit.
inline ShiftWidth two_pole_radicals(double coupling, double bandwidth, double omega_a) {
    const double u2 = omega_a * omega_a + 4.0 * coupling * coupling - bandwidth * bandwidth;
    const double root = std::sqrt(u2 * u2 + 4.0 * omega_a * omega_a * bandwidth * bandwidth);
    double shift;
    if (omega_a == 0.0) shift = 0.5 * std::sqrt(std::max(0.0, 0.5 * (root + u2)));
    else shift = -0.5 * omega_a + 0.5 * omega_a * std::sqrt((root + u2) / (2.0 * omega_a * omega_a));
    const double width = bandwidth - std::sqrt(0.5 * (root - u2));
    return {shift, width};
}

/// Pole-only propagator G_WW(E) = 1 / (E - E_pole), amplitude exp(-i E_pole t).
struct WeisskopfWigner {
    cplx pole;

    cplx amplitude(double t) const { return std::exp(cplx(0.0, -1.0) * pole * t); }
    cplx propagator(cplx e) const { return 1.0 / (e - pole); }
};

inline WeisskopfWigner weisskopf_wigner(const LeeModel& model, const PoleSearchOptions& opt = {}) {
    return {find_pole(model, opt).energy};
}

} // namespace leezeno
