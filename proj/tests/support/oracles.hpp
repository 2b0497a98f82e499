// oracles.hpp - Independent reference computations for the tests, built on Boost.Math
// adaptive quadrature and plain Eigen rather than on the library's own kernels

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

using cplx = std::complex<double>;
using Density = std::function<double(double)>;

inline double integrate(const Density& f, double a, double b, double tol = 1e-13) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    return gauss_kronrod<double, 61>::integrate(f, a, b, 25, tol, &err);
}

/// Sigma(E) = int g2(w) / (E - w) dw for E off the real axis, by adaptive Gauss-Kronrod on
/// pieces split at Re E so the near-singular peak sits at a panel boundary.
inline cplx sigma(const Density& g2, cplx e, double a, double b) {
    auto re = [&](double w) { return (g2(w) / (e - w)).real(); };
    auto im = [&](double w) { return (g2(w) / (e - w)).imag(); };
    const double x = e.real();
    double r = 0.0, i = 0.0;
    if (x > a && x < b) {
        r = integrate(re, a, x) + integrate(re, x, b);
        i = integrate(im, a, x) + integrate(im, x, b);
    } else {
        r = integrate(re, a, b);
        i = integrate(im, a, b);
    }
    return {r, i};
}

/// Same transform integrated piece by piece between the given breakpoints.
inline cplx sigma_pieces(const Density& g2, cplx e, const std::vector<double>& breaks) {
    using boost::math::quadrature::gauss_kronrod;
    auto re = [&](double w) { return (g2(w) / (e - w)).real(); };
    auto im = [&](double w) { return (g2(w) / (e - w)).imag(); };
    // adaptive only where the kernel is sharp on the scale of the piece
    auto piece = [&](auto&& f, double a, double b) {
        if (std::abs(e - 0.5 * (a + b)) > 10.0 * (b - a)) return boost::math::quadrature::gauss<double, 30>::integrate(f, a, b);
        return gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-14);
    };
    double r = 0.0, i = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], b = breaks[k + 1];
        if (e.real() > a && e.real() < b) {
            r += piece(re, a, e.real()) + piece(re, e.real(), b);
            i += piece(im, a, e.real()) + piece(im, e.real(), b);
        } else {
            r += piece(re, a, b);
            i += piece(im, a, b);
        }
    }
    return {r, i};
}

/// Principal value of int_a^b g2(w) / (x - w) dw via subtraction of g2(x):
/// int (g2(w) - g2(x)) / (x - w) dw + g2(x) log((x - a) / (b - x)).
inline double principal_value(const Density& g2, double x, double a, double b) {
    const double gx = g2(x);
    auto h = [&](double w) { return w == x ? 0.0 : (g2(w) - gx) / (x - w); };
    return integrate(h, a, x) + integrate(h, x, b) + gx * std::log((x - a) / (b - x));
}

/// Same subtraction route, integrated piece by piece between the given breakpoints
/// (for piecewise-smooth densities such as interpolated tables).
inline double principal_value_pieces(const Density& g2, double x, const std::vector<double>& breaks) {
    using boost::math::quadrature::gauss_kronrod;
    const double gx = g2(x);
    auto h = [&](double w) { return w == x ? 0.0 : (g2(w) - gx) / (x - w); };
    auto piece = [&](double a, double b) { return boost::math::quadrature::gauss<double, 30>::integrate(h, a, b); };
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        if (x > a && x < b) sum += piece(a, x) + piece(x, b);
        else sum += piece(a, b);
    }
    return sum + gx * std::log((x - breaks.front()) / (breaks.back() - x));
}

/// Lorentzian density lambda^2 Lambda / (pi (w^2 + Lambda^2)).
inline double lorentzian(double lambda, double bandwidth, double w) {
    return lambda * lambda * bandwidth / (M_PI * (w * w + bandwidth * bandwidth));
}

/// (exp(-i M t))_{00} for a 2x2 matrix by Cayley-Hamilton with the eigenvalues of M.
inline cplx expm_2x2_aa(const Eigen::Matrix2cd& m, double t) {
    const cplx tr = m.trace();
    const cplx det = m.determinant();
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const cplx l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
    const cplx e1 = std::exp(cplx(0, -1) * l1 * t), e2 = std::exp(cplx(0, -1) * l2 * t);
    // f(M) = (f(l1)(M - l2) - f(l2)(M - l1)) / (l1 - l2)
    return (e1 * (m(0, 0) - l2) - e2 * (m(0, 0) - l1)) / (l1 - l2);
}

/// <a| exp(-iHt) |a> for a Hermitian H given densely, by full eigendecomposition.
inline cplx dense_survival(const Eigen::MatrixXd& h, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    cplx a = 0.0;
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
        const double v = es.eigenvectors()(0, k);
        a += v * v * std::exp(cplx(0.0, -es.eigenvalues()(k) * t));
    }
    return a;
}

} // namespace oracle
