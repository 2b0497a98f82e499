// form_factor.hpp - Spectral coupling densities g^2(omega) and the Lee model value type

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "leezeno/error.hpp"
#include "leezeno/quadrature.hpp"

namespace leezeno {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// g^2(w) = coupling^2 * bandwidth / (pi (w^2 + bandwidth^2)), peaked at w = 0.
struct Lorentzian {
    double coupling{0.0};   // lambda
    double bandwidth{1.0};  // Lambda
};

// g^2(w) = rate / (2 pi) on the whole real axis.
struct FlatBand {
    double rate{0.0};       // gamma
};

// Measure coupling^2 * delta(w - location). No pointwise density.
struct Dirac {
    double coupling{0.0};
    double location{0.0};
};

/// Sampled density interpolated by a monotone (Fritsch-Carlson) cubic; zero outside the grid.
///
/// Each interval stores its cubic in powers of (w - mid), which is the form the
/// Cauchy-transform kernels in self_energy.hpp integrate in closed form.
class Tabulated {
public:
    struct Piece {
        double lo{};
        double hi{};
        double mid{};
        double width{};
        std::array<double, 4> coef{};  // p(w) = sum coef[k] (w - mid)^k

        double value(double w) const {
            const double t = w - mid;
            return coef[0] + t * (coef[1] + t * (coef[2] + t * coef[3]));
        }
        cplx value(cplx w) const {
            const cplx t = w - mid;
            return coef[0] + t * (coef[1] + t * (coef[2] + t * coef[3]));
        }
        double slope(double w) const {
            const double t = w - mid;
            return coef[1] + t * (2.0 * coef[2] + 3.0 * t * coef[3]);
        }
    };

    // Local least-squares polynomial used to continue the density off the real axis.
    struct LocalFit {
        double center{};
        double scale{};
        double radius{};           // trusted distance from center
        bool near_edge{false};     // window touches an end of the grid
        double defect{};           // |fit - interpolant| at the requested point over the window's peak
        std::vector<double> coef;  // in powers of (w - center) / scale

        cplx value(cplx w) const {
            const cplx x = (w - center) / scale;
            cplx acc = 0.0;
            for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = acc * x + *it;
            return acc;
        }
        cplx derivative(cplx w) const {
            const cplx x = (w - center) / scale;
            cplx acc = 0.0;
            for (std::size_t k = coef.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * coef[k];
            return acc / scale;
        }
    };

    static Tabulated from_samples(std::vector<double> omega, std::vector<double> g2) {
        if (omega.size() != g2.size()) fail(Errc::InvalidArgument, "omega and g2 sample counts differ");
        if (omega.size() < 2) fail(Errc::InvalidArgument, "tabulated density needs at least two samples");
        for (std::size_t i = 0; i < omega.size(); ++i) {
            if (!std::isfinite(omega[i]) || !std::isfinite(g2[i]))
                fail(Errc::InvalidArgument, "non-finite sample at index " + std::to_string(i));
            if (g2[i] < 0.0) fail(Errc::InvalidArgument, "negative density at index " + std::to_string(i));
            if (i > 0 && !(omega[i] > omega[i - 1]))
                fail(Errc::InvalidArgument, "omega not strictly increasing at index " + std::to_string(i));
        }
        auto data = std::make_shared<Data>();
        data->omega = std::move(omega);
        data->g2 = std::move(g2);
        build_pieces(*data);
        Tabulated t;
        t.data_ = std::move(data);
        return t;
    }

    std::span<const double> omega() const { return data_->omega; }
    std::span<const double> g2() const { return data_->g2; }
    std::span<const Piece> pieces() const { return data_->pieces; }
    double lower() const { return data_->omega.front(); }
    double upper() const { return data_->omega.back(); }

    std::size_t piece_index(double w) const {
        const auto& x = data_->omega;
        auto it = std::upper_bound(x.begin(), x.end(), w);
        std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
        return std::min(i, data_->pieces.size() - 1);
    }

    double operator()(double w) const {
        if (w < lower() || w > upper()) return 0.0;
        // monotone interpolation keeps values within the bracketing samples, so >= 0
        return std::max(0.0, data_->pieces[piece_index(w)].value(w));
    }

    double slope(double w) const {
        if (w < lower() || w > upper()) return 0.0;
        return data_->pieces[piece_index(w)].slope(w);
    }

    // Exact integral of the interpolant (Simpson is exact on cubics).
    double integral() const {
        double sum = 0.0;
        for (const auto& p : data_->pieces)
            sum += p.width / 6.0 * (p.value(p.lo) + 4.0 * p.value(p.mid) + p.value(p.hi));
        return sum;
    }

    // Exact integral of w * g^2(w) (three-point Gauss is exact on quartics).
    double first_moment() const {
        const auto& rule = quad::fixed_rule<3>();
        double sum = 0.0;
        for (const auto& p : data_->pieces)
            sum += quad::integrate(rule, p.lo, p.hi, [&](double w) { return w * p.value(w); });
        return sum;
    }

    // Degree <= 4 least-squares fit over the samples nearest to w, trusted within half their span.
    // The window starts at kFitWindow samples and widens until it reaches `reach` below the axis.
    LocalFit continuation_at(double w, double reach = 0.0) const {
        const auto& x = data_->omega;
        const auto& y = data_->g2;
        const std::size_t n = x.size();
        auto it = std::lower_bound(x.begin(), x.end(), w);
        std::size_t center = static_cast<std::size_t>(it - x.begin());
        if (center >= n) center = n - 1;
        if (center > 0 && std::abs(x[center - 1] - w) < std::abs(x[center] - w)) --center;

        LocalFit fit;
        std::size_t m = std::min<std::size_t>(kFitWindow, n);
        std::size_t first = 0;
        for (;;) {
            first = center >= m / 2 ? center - m / 2 : 0;
            if (first + m > n) first = n - m;
            const double a = x[first];
            const double b = x[first + m - 1];
            fit.center = 0.5 * (a + b);
            fit.scale = 0.5 * (b - a);
            fit.radius = 0.5 * (b - a);
            fit.near_edge = (first == 0 && w - a < fit.radius) || (first + m == n && b - w < fit.radius);
            if (m == n || std::hypot(w - fit.center, reach) <= fit.radius) break;
            m = std::min(n, 2 * m - 1);
        }
        const std::size_t degree = std::min<std::size_t>(4, m - 1);
        Eigen::MatrixXd vander(m, degree + 1);
        Eigen::VectorXd rhs(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double s = (x[first + i] - fit.center) / fit.scale;
            double pw = 1.0;
            for (std::size_t k = 0; k <= degree; ++k) {
                vander(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = pw;
                pw *= s;
            }
            rhs(static_cast<Eigen::Index>(i)) = y[first + i];
        }
        Eigen::VectorXd c = vander.colPivHouseholderQr().solve(rhs);
        fit.coef.assign(c.data(), c.data() + c.size());
        const double peak = *std::max_element(y.begin() + static_cast<std::ptrdiff_t>(first),
                                              y.begin() + static_cast<std::ptrdiff_t>(first + m));
        const double miss = std::abs(fit.value(cplx(w, 0.0)).real() - (*this)(w));
        fit.defect = peak > 0.0 ? miss / peak : miss;
        return fit;
    }

    static constexpr std::size_t kFitWindow = 13;
    static constexpr double kFitDefect = 1e-5;  // relative mismatch above which continuation is refused

private:
    struct Data {
        std::vector<double> omega;
        std::vector<double> g2;
        std::vector<Piece> pieces;
    };

    static double end_slope(double h0, double h1, double d0, double d1) {
        // shape-preserving three-point end condition
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) return 0.0;
        if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return s;
    }

    static void build_pieces(Data& d) {
        const std::size_t n = d.omega.size();
        std::vector<double> h(n - 1);
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = d.omega[i + 1] - d.omega[i];
            delta[i] = (d.g2[i + 1] - d.g2[i]) / h[i];
        }
        std::vector<double> slope(n, 0.0);
        if (n == 2) {
            slope[0] = slope[1] = delta[0];
        } else {
            for (std::size_t i = 1; i + 1 < n; ++i) {
                if (delta[i - 1] * delta[i] <= 0.0) continue;
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                slope[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
            slope[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            slope[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        d.pieces.resize(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            auto& p = d.pieces[i];
            p.lo = d.omega[i];
            p.hi = d.omega[i + 1];
            p.width = h[i];
            p.mid = 0.5 * (p.lo + p.hi);
            // cubic in u = w - lo, then re-centred on the midpoint
            const double c0 = d.g2[i];
            const double c1 = slope[i];
            const double c2 = (3.0 * delta[i] - 2.0 * slope[i] - slope[i + 1]) / h[i];
            const double c3 = (slope[i] + slope[i + 1] - 2.0 * delta[i]) / (h[i] * h[i]);
            const double s = 0.5 * h[i];
            p.coef[0] = c0 + s * (c1 + s * (c2 + s * c3));
            p.coef[1] = c1 + s * (2.0 * c2 + 3.0 * s * c3);
            p.coef[2] = c2 + 3.0 * s * c3;
            p.coef[3] = c3;
        }
    }

    std::shared_ptr<const Data> data_;
};

using FormFactor = std::variant<Lorentzian, FlatBand, Dirac, Tabulated>;

inline FormFactor make_lorentzian(double coupling, double bandwidth) {
    if (!(coupling >= 0.0) || !std::isfinite(coupling)) fail(Errc::InvalidArgument, "lorentzian coupling must be >= 0");
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) fail(Errc::InvalidArgument, "lorentzian bandwidth must be > 0");
    return Lorentzian{coupling, bandwidth};
}

inline FormFactor make_flat_band(double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) fail(Errc::InvalidArgument, "flat-band rate must be >= 0");
    return FlatBand{rate};
}

inline FormFactor make_dirac(double coupling, double location) {
    if (!(coupling >= 0.0) || !std::isfinite(coupling) || !std::isfinite(location))
        fail(Errc::InvalidArgument, "dirac coupling must be >= 0 and location finite");
    return Dirac{coupling, location};
}

inline FormFactor make_tabulated(std::vector<double> omega, std::vector<double> g2) {
    return Tabulated::from_samples(std::move(omega), std::move(g2));
}

struct Support {
    double lower{-std::numeric_limits<double>::infinity()};
    double upper{std::numeric_limits<double>::infinity()};

    bool contains(double w) const { return w >= lower && w <= upper; }
    bool interior(double w) const { return w > lower && w < upper; }
};

inline Support support(const FormFactor& ff) {
    return std::visit(
        [](const auto& f) -> Support {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Dirac>) return {f.location, f.location};
            else if constexpr (std::is_same_v<T, Tabulated>) return {f.lower(), f.upper()};
            else return {};
        },
        ff);
}

// Lower spectral bound omega_g.
inline double threshold(const FormFactor& ff) { return support(ff).lower; }

inline std::string kind_name(const FormFactor& ff) {
    static constexpr const char* names[] = {"lorentzian", "flat", "dirac", "tabulated"};
    return names[ff.index()];
}

struct LeeModel {
    double omega_a{0.0};
    FormFactor ff{Lorentzian{}};
};

} // namespace leezeno
