// oracle.hpp - Discretized-continuum Hamiltonian: Gauss-Legendre modes, exact diagonalization
// and the resulting survival amplitude

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "leezeno/error.hpp"
#include "leezeno/form_factor.hpp"
#include "leezeno/quadrature.hpp"
#include "leezeno/survival.hpp"

namespace leezeno {

enum class OracleSolver {
    Auto,     // dense below kDenseLimit, secular equation above
    Dense,    // Eigen SelfAdjointEigenSolver on the full arrowhead matrix
    Secular,  // O(N^2) arrowhead secular-equation roots
};

struct OracleOptions {
    double tail_mass{1e-8};  // continuum weight dropped by the truncated window
    OracleSolver solver{OracleSolver::Auto};
    double completeness_tolerance{1e-10};
    static constexpr std::size_t kDenseLimit = 400;
};

/// Modes of the truncated continuum: energies w_k and squared couplings c_k^2 = g^2(w_k) dw_k.
struct DiscreteContinuum {
    std::vector<double> energies;
    std::vector<double> couplings2;
};

/// Eigen-decomposition projected on |a>: eigenvalues E_k and overlaps |<a|k>|^2.
struct OracleSpectrum {
    std::vector<double> energies;
    std::vector<double> weights;
    double completeness{1.0};  // sum of weights before renormalisation
};

inline DiscreteContinuum discretize(const FormFactor& ff, std::size_t n, double tail_mass = 1e-8) {
    DiscreteContinuum dc;
    std::visit(
        overloaded{
            [&](const Lorentzian& f) {
                // w = Lambda tan(theta): equal-weight tails, window dropping 'tail_mass' of the density
                if (n < 100) fail(Errc::InvalidArgument, "oracle needs N >= 100 modes");
                const double theta_max = 0.5 * pi * (1.0 - tail_mass);
                const auto rule = quad::gauss_legendre(n);
                for (std::size_t k = 0; k < n; ++k) {
                    const double th = theta_max * rule.nodes[k];
                    const double sec = 1.0 / std::cos(th);
                    const double w = f.bandwidth * std::tan(th);
                    const double jac = f.bandwidth * sec * sec * theta_max * rule.weights[k];
                    dc.energies.push_back(w);
                    dc.couplings2.push_back(f.coupling * f.coupling * f.bandwidth / (pi * (w * w + f.bandwidth * f.bandwidth)) * jac);
                }
            },
            [&](const FlatBand&) {
                fail(Errc::SecondMomentDivergent, "flat band has no finite truncation window");
            },
            [&](const Dirac& f) {
                dc.energies.push_back(f.location);
                dc.couplings2.push_back(f.coupling * f.coupling);
            },
            [&](const Tabulated& f) {
                if (n < 100) fail(Errc::InvalidArgument, "oracle needs N >= 100 modes");
                const auto rule = quad::gauss_legendre(n);
                const double half = 0.5 * (f.upper() - f.lower());
                const double mid = 0.5 * (f.upper() + f.lower());
                for (std::size_t k = 0; k < n; ++k) {
                    const double w = mid + half * rule.nodes[k];
                    dc.energies.push_back(w);
                    dc.couplings2.push_back(f(w) * half * rule.weights[k]);
                }
            },
        },
        ff);
    return dc;
}

namespace detail {

// Eigenvalues of the arrowhead matrix [[omega_a, c^T],[c, diag(d)]] (d strictly increasing, c_k != 0)
// as the roots of f(x) = x - omega_a - sum c_k^2 / (x - d_k). Each root is located relative to the
// nearer pole d_k, so the gaps x - d_j are formed without cancellation.
inline OracleSpectrum secular_solve(double omega_a, const std::vector<double>& d, const std::vector<double>& c2) {
    const std::size_t n = d.size();
    OracleSpectrum out;
    out.energies.reserve(n + 1);
    out.weights.reserve(n + 1);
    const double norm2 = std::accumulate(c2.begin(), c2.end(), 0.0);
    const double radius = std::sqrt(norm2);
    std::vector<double> gap(n);

    // F(delta) relative to origin d[o]: gap[j] = d[o] - d[j]
    auto eval = [&](double origin, double delta, double& f, double& fp) {
        double s = 0.0, sp = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double inv = 1.0 / (gap[j] + delta);
            const double t = c2[j] * inv;
            s += t;
            sp += t * inv;
        }
        f = (origin - omega_a) + delta - s;
        fp = 1.0 + sp;
    };
    auto root = [&](std::size_t o, double lo, double hi) {
        for (std::size_t j = 0; j < n; ++j) gap[j] = d[o] - d[j];
        double delta = 0.5 * (lo + hi);
        double f = 0.0, fp = 1.0;
        for (int it = 0; it < 300; ++it) {
            eval(d[o], delta, f, fp);
            if (f == 0.0) break;
            (f < 0.0 ? lo : hi) = delta;
            double next = delta - f / fp;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - delta) <= 2e-16 * std::abs(delta) || next == lo || next == hi) {
                delta = next;
                break;
            }
            delta = next;
        }
        double sp = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double inv = 1.0 / (gap[j] + delta);
            sp += c2[j] * inv * inv;
        }
        out.energies.push_back(d[o] + delta);
        out.weights.push_back(1.0 / (1.0 + sp));
    };

    auto f_mid = [&](std::size_t k, double half) {
        for (std::size_t j = 0; j < n; ++j) gap[j] = d[k] - d[j];
        double f = 0.0, fp = 0.0;
        eval(d[k], half, f, fp);
        return f;
    };

    // below d_0
    const double lower = std::min(omega_a, d.front()) - radius - 1.0;
    root(0, lower - d.front(), 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double half = 0.5 * (d[k + 1] - d[k]);
        if (f_mid(k, half) >= 0.0) root(k, 0.0, half);
        else root(k + 1, -half, 0.0);
    }
    const double upper = std::max(omega_a, d.back()) + radius + 1.0;
    root(n - 1, 0.0, upper - d.back());
    for (double w : out.weights) out.completeness += w;
    out.completeness -= 1.0;
    return out;
}

inline OracleSpectrum dense_solve(double omega_a, const std::vector<double>& d, const std::vector<double>& c2) {
    const auto n = static_cast<Eigen::Index>(d.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + 1, n + 1);
    h(0, 0) = omega_a;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double c = std::sqrt(c2[static_cast<std::size_t>(k)]);
        h(0, k + 1) = c;
        h(k + 1, 0) = c;
        h(k + 1, k + 1) = d[static_cast<std::size_t>(k)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) fail(Errc::OracleFailed, "dense eigensolver did not converge");
    OracleSpectrum out;
    out.completeness = 0.0;
    for (Eigen::Index k = 0; k <= n; ++k) {
        const double v = es.eigenvectors()(0, k);
        out.energies.push_back(es.eigenvalues()(k));
        out.weights.push_back(v * v);
        out.completeness += v * v;
    }
    return out;
}

} // namespace detail

inline OracleSpectrum diagonalize(double omega_a, const DiscreteContinuum& dc, OracleSolver solver = OracleSolver::Auto) {
    // modes with zero coupling never mix with |a>
    std::vector<std::pair<double, double>> modes;
    for (std::size_t k = 0; k < dc.energies.size(); ++k)
        if (dc.couplings2[k] > 0.0) modes.emplace_back(dc.energies[k], dc.couplings2[k]);
    std::sort(modes.begin(), modes.end());
    std::vector<double> d, c2;
    for (const auto& [w, c] : modes) {
        if (!d.empty() && w == d.back()) {
            c2.back() += c;  // degenerate modes: one bright combination
            continue;
        }
        d.push_back(w);
        c2.push_back(c);
    }
    if (d.empty()) return {{omega_a}, {1.0}, 1.0};
    const bool dense = solver == OracleSolver::Dense ||
                       (solver == OracleSolver::Auto && d.size() + 1 <= OracleOptions::kDenseLimit);
    OracleSpectrum s = dense ? detail::dense_solve(omega_a, d, c2) : detail::secular_solve(omega_a, d, c2);
    for (std::size_t k = 0; k < s.energies.size(); ++k)
        if (!std::isfinite(s.energies[k]) || !std::isfinite(s.weights[k]))
            fail(Errc::OracleFailed, "non-finite eigenpair");
    return s;
}

inline OracleSpectrum oracle_spectrum(const LeeModel& model, std::size_t n, const OracleOptions& opt = {}) {
    const auto dc = discretize(model.ff, n, opt.tail_mass);
    OracleSpectrum s = diagonalize(model.omega_a, dc, opt.solver);
    if (std::abs(s.completeness - 1.0) > opt.completeness_tolerance)
        fail(Errc::OracleFailed, "eigenvector overlaps do not sum to one");
    for (double& w : s.weights) w /= s.completeness;
    return s;
}

inline cplx oracle_amplitude(const OracleSpectrum& s, double t) {
    cplx sum = 0.0;
    for (std::size_t k = 0; k < s.energies.size(); ++k) sum += s.weights[k] * std::exp(cplx(0.0, -s.energies[k] * t));
    return sum;
}

inline SurvivalSeries amplitude_oracle(const LeeModel& model, std::size_t n, const std::vector<double>& times,
                                       const OracleOptions& opt = {}) {
    check_times(times);
    const auto s = oracle_spectrum(model, n, opt);
    auto series = tabulate_series(times, Method::Oracle, [&](double t) { return oracle_amplitude(s, t); });
    series.normalization = s.completeness;
    return series;
}

} // namespace leezeno
