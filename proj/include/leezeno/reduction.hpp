// reduction.hpp - Two-pole reduction of a form factor, the equivalent cascade model and the
// effective non-Hermitian 2x2 Hamiltonian

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "leezeno/error.hpp"
#include "leezeno/form_factor.hpp"
#include "leezeno/poles.hpp"
#include "leezeno/self_energy.hpp"
#include "leezeno/spectral.hpp"

namespace leezeno {

/// Lorentzian surrogate with the same tau_Z and the same golden-rule rate, energies
/// measured from omega_a: Sigma(E) = lambda_eff^2 / (E + i Lambda_eff), Sigma(0) = -i b.
struct TwoPoleReduction {
    double lambda_eff{};  // 1 / tau_Z
    double Lambda_eff{};  // 1 / (b tau_Z^2)
    double b{};           // pi g^2(omega_a)

    cplx sigma(cplx e) const { return lambda_eff * lambda_eff / (e + cplx(0.0, Lambda_eff)); }
    FormFactor form_factor() const { return Lorentzian{lambda_eff, Lambda_eff}; }
    /// Reduced model, with the initial level at the origin of the reduced energy axis.
    LeeModel model() const { return {0.0, form_factor()}; }
};

inline TwoPoleReduction two_pole_reduce(const FormFactor& ff, double omega_a) {
    if (std::holds_alternative<Dirac>(ff))
        fail(Errc::ReductionDegenerate, "a discrete form factor has no decay channel to preserve");
    const double tz = zeno_time(ff);
    if (!std::isfinite(tz)) fail(Errc::ReductionDegenerate, "decoupled level");
    const double b = pi * eval_density(ff, omega_a);
    if (!(b > 0.0)) fail(Errc::ReductionDegenerate, "g^2(omega_a) = 0");
    return {1.0 / tz, 1.0 / (b * tz * tz), b};
}

/// Level |a> coupled with strength lambda to an auxiliary level |b> at omega_b, which in turn
/// decays into a continuum with self-energy Sigma_b.
struct CascadeModel {
    FormFactor source;
    double omega_b{};
    double coupling{};  // lambda = 1 / tau_Z

    /// Sigma_b(E) = E - omega_b - lambda^2 / Sigma_a(E), off the real axis.
    cplx sigma_b(cplx e) const {
        const cplx sa = sigma_first(source, e).value;
        if (std::abs(sa) == 0.0 || !std::isfinite(std::abs(sa)))
            fail(Errc::CascadeSingular, "Sigma_a vanishes at the sampled energy");
        return e - omega_b - coupling * coupling / sa;
    }

    /// g_b^2(w) = -Im Sigma_b(w + i0) / pi.
    double density_b(double w) const {
        const cplx sa = sigma_boundary(source, w, Side::Above).value;
        if (std::abs(sa) == 0.0) fail(Errc::CascadeSingular, "Sigma_a vanishes at the sampled energy");
        return -(w - omega_b - coupling * coupling / sa).imag() / pi;
    }

    cplx sigma_a_rebuilt(cplx e) const { return coupling * coupling / (e - omega_b - sigma_b(e)); }
};

inline CascadeModel cascade_equivalent(const LeeModel& model) {
    const double tz = zeno_time(model.ff);
    if (!std::isfinite(tz)) fail(Errc::CascadeSingular, "decoupled level has no cascade form");
    return {model.ff, first_moment(model.ff), 1.0 / tz};
}

// ---------------------------------------------------------------------------------------------
// Effective 2x2 Hamiltonian

using Matrix2c = Eigen::Matrix2cd;

/// M = [[omega_a, lambda], [lambda, -i Lambda]]; its eigenvalues are the two poles of the Lorentzian propagator.
inline Matrix2c effective_2x2(double coupling, double bandwidth, double omega_a) {
    if (!(coupling >= 0.0) || !(bandwidth > 0.0)) fail(Errc::InvalidArgument, "need lambda >= 0 and Lambda > 0");
    Matrix2c m;
    m << cplx(omega_a, 0.0), cplx(coupling, 0.0), cplx(coupling, 0.0), cplx(0.0, -bandwidth);
    return m;
}

/// Eigenvalues ordered by decreasing imaginary part (the long-lived pole first).
inline std::array<cplx, 2> eigenvalues_2x2(const Matrix2c& m) {
    Eigen::ComplexEigenSolver<Matrix2c> es(m, false);
    if (es.info() != Eigen::Success) fail(Errc::InvalidArgument, "2x2 eigensolver failed");
    std::array<cplx, 2> ev{es.eigenvalues()(0), es.eigenvalues()(1)};
    // equal widths (strong coupling at resonance): the pole on the right first, as in two_pole_closed
    const double tie = 1e-12 * (std::abs(ev[0]) + std::abs(ev[1]));
    if (ev[0].imag() < ev[1].imag() - tie || (std::abs(ev[0].imag() - ev[1].imag()) <= tie && ev[0].real() < ev[1].real()))
        std::swap(ev[0], ev[1]);
    return ev;
}

/// (exp(-i M t))_{aa}.
inline cplx evolve_2x2(const Matrix2c& m, double t) {
    const Matrix2c u = (cplx(0.0, -t) * m).exp();
    return u(0, 0);
}

/// Entry -i (gamma/2 + (2 / (tau_Z^2 gamma)) / (1 + 4 shift^2 / gamma^2)) built from the exact
/// pole, compared against -i Lambda as a weak-coupling diagnostic.
struct ParametrizedEntry {
    cplx entry;
    double relative_deviation;  // |entry + i Lambda| / Lambda
};

inline ParametrizedEntry parametrized_entry(double coupling, double bandwidth, double omega_a) {
    const auto p = two_pole_closed(coupling, bandwidth, omega_a);
    const double g = p.width;
    const double tz2 = 1.0 / (coupling * coupling);
    const double im = 0.5 * g + (2.0 / (tz2 * g)) / (1.0 + 4.0 * p.shift * p.shift / (g * g));
    const cplx e(0.0, -im);
    return {e, std::abs(e + cplx(0.0, bandwidth)) / bandwidth};
}

} // namespace leezeno
