// survival.hpp - Survival amplitude A(t) = <a|exp(-iHt)|a> by closed forms, spectral inversion
// and short-time / limiting expansions

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "leezeno/error.hpp"
#include "leezeno/form_factor.hpp"
#include "leezeno/poles.hpp"
#include "leezeno/quadrature.hpp"
#include "leezeno/self_energy.hpp"
#include "leezeno/spectral.hpp"

namespace leezeno {

enum class Method { TwoPoleClosed, Spectral, Oracle, WW, ShortTime, Rabi, StrongCoupling };

constexpr std::string_view to_string(Method m) noexcept {
    switch (m) {
    case Method::TwoPoleClosed: return "two-pole";
    case Method::Spectral: return "spectral";
    case Method::Oracle: return "oracle";
    case Method::WW: return "ww";
    case Method::ShortTime: return "short-time";
    case Method::Rabi: return "rabi";
    case Method::StrongCoupling: return "strong-coupling";
    }
    return "unknown";
}

inline std::optional<Method> parse_method(std::string_view name) {
    for (Method m : {Method::TwoPoleClosed, Method::Spectral, Method::Oracle, Method::WW, Method::ShortTime,
                     Method::Rabi, Method::StrongCoupling})
        if (to_string(m) == name) return m;
    return std::nullopt;
}

struct SurvivalSeries {
    std::vector<double> times;
    std::vector<cplx> amplitude;
    std::vector<double> probability;
    Method method{Method::TwoPoleClosed};
    double normalization{1.0};  // integral of the spectral density before renormalising, where relevant
};

inline void check_times(const std::vector<double>& times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || !std::isfinite(times[i])) fail(Errc::InvalidArgument, "times must be finite and >= 0");
        if (i > 0 && !(times[i] > times[i - 1])) fail(Errc::InvalidArgument, "times must be strictly increasing");
    }
}

template <class F>
SurvivalSeries tabulate_series(const std::vector<double>& times, Method method, F&& amplitude_at) {
    check_times(times);
    SurvivalSeries s;
    s.method = method;
    s.times = times;
    s.amplitude.reserve(times.size());
    s.probability.reserve(times.size());
    for (double t : times) {
        const cplx a = amplitude_at(t);
        s.amplitude.push_back(a);
        s.probability.push_back(std::norm(a));
    }
    return s;
}

// ---------------------------------------------------------------------------------------------
// Two-pole closed form

namespace detail {

// (e^z - 1) / z without cancellation, equal to 1 at z = 0
inline cplx expm1_over(cplx z) {
    if (z == 0.0) return 1.0;
    const double s = std::sin(0.5 * z.imag());
    const cplx em1(std::expm1(z.real()) * std::cos(z.imag()) - 2.0 * s * s, std::exp(z.real()) * std::sin(z.imag()));
    return em1 / z;
}

// A(t) e^{i E1 t} = 1 + R (e^{-i (E2 - E1) t} - 1), with R = (E2 + i Lambda) / (E2 - E1)
// written so the double pole E1 = E2 is a regular limit.
inline cplx two_pole_beat(const TwoPoleParams& p, double t) {
    const cplx mit(0.0, -t);
    return 1.0 + (p.e2 + cplx(0.0, p.bandwidth)) * mit * expm1_over(mit * (p.e2 - p.e1));
}

} // namespace detail

/// A(t) = (1 - R) exp(-i E1 t) + R exp(-i E2 t).
inline cplx amplitude_two_pole(const TwoPoleParams& p, double t) {
    return std::exp(cplx(0.0, -1.0) * p.e1 * t) * detail::two_pole_beat(p, t);
}

/// log A(t) with the dominant exponential factored out, finite long after |A|^2 underflows.
inline cplx log_amplitude_two_pole(const TwoPoleParams& p, double t) {
    return cplx(0.0, -1.0) * p.e1 * t + std::log(detail::two_pole_beat(p, t));
}

/// P(t) = Z e^{-gamma t} + 2 Re[R* (1 - R) e^{-i(omega_a + 2 shift) t}] e^{-Lambda t} + |R|^2 e^{-(2 Lambda - gamma) t}.
inline double probability_two_pole(const TwoPoleParams& p, double t) {
    if (!std::isfinite(p.z)) return std::norm(amplitude_two_pole(p, t));  // double pole
    const double freq = p.omega_a + 2.0 * p.shift;
    const cplx cross = std::conj(p.r) * (1.0 - p.r) * std::exp(cplx(0.0, -freq * t));
    return p.z * std::exp(-p.width * t) + 2.0 * cross.real() * std::exp(-p.bandwidth * t) +
           std::norm(p.r) * std::exp(-(2.0 * p.bandwidth - p.width) * t);
}

inline SurvivalSeries series_two_pole(const TwoPoleParams& p, const std::vector<double>& times) {
    return tabulate_series(times, Method::TwoPoleClosed, [&](double t) { return amplitude_two_pole(p, t); });
}

// ---------------------------------------------------------------------------------------------
// Short times

struct ShortTimePoles {
    double eta1;
    double eta2;
};

struct ShortTime {
    double quadratic;           // 1 - t^2 / tau_Z^2
    double two_pole_effective;  // |amplitude|^2
    ShortTimePoles poles;
    cplx amplitude;             // (eta1 e^{-i eta1 t} - eta2 e^{-i eta2 t}) / (eta1 - eta2)
};

inline ShortTimePoles short_time_poles(double omega_a, double zeno_time) {
    const double half = 0.5 * omega_a;
    const double root = std::sqrt(half * half + 1.0 / (zeno_time * zeno_time));
    return {half + root, half - root};
}

inline ShortTime short_time(const LeeModel& model, double t) {
    const double tz = zeno_time(model.ff);
    const auto eta = short_time_poles(model.omega_a, tz);
    const double d = eta.eta1 - eta.eta2;
    const double eff = (eta.eta1 * eta.eta1 + eta.eta2 * eta.eta2 - 2.0 * eta.eta1 * eta.eta2 * std::cos(t * d)) / (d * d);
    const cplx amp = (eta.eta1 * std::exp(cplx(0.0, -eta.eta1 * t)) - eta.eta2 * std::exp(cplx(0.0, -eta.eta2 * t))) / d;
    return {1.0 - t * t / (tz * tz), eff, eta, amp};
}

// ---------------------------------------------------------------------------------------------
// Rabi and strong-coupling limits

struct RabiResult {
    cplx amplitude;
    double probability;
    double rabi_frequency;  // Omega = sqrt(lambda^2 + omega_a^2 / 4)
};

/// Two-level dynamics of |a> (energy omega_a) coupled with strength lambda to a level at 0.
/// Eigenvalues omega_a/2 +- Omega; P(t) = 1 - (lambda/Omega)^2 sin^2(Omega t).
inline RabiResult rabi_survival(double coupling, double omega_a, double t) {
    if (!(coupling > 0.0)) fail(Errc::InvalidArgument, "Rabi coupling must be > 0");
    const double omega = std::sqrt(coupling * coupling + 0.25 * omega_a * omega_a);
    const double ratio = omega_a / (2.0 * omega);
    const cplx up = std::exp(cplx(0.0, -(0.5 * omega_a + omega) * t));
    const cplx down = std::exp(cplx(0.0, -(0.5 * omega_a - omega) * t));
    const cplx a = 0.5 * (1.0 + ratio) * up + 0.5 * (1.0 - ratio) * down;
    const double s = std::sin(omega * t);
    const double p = 1.0 - (coupling * coupling) / (omega * omega) * s * s;
    return {a, p, omega};
}

/// Leading large-lambda form of the two-pole amplitude: oscillation at lambda under an
/// envelope exp(-Lambda t / 2).
inline cplx strong_coupling_amplitude(double coupling, double bandwidth, double omega_a, double t) {
    if (!(coupling > 0.0)) fail(Errc::InvalidArgument, "strong-coupling form needs lambda > 0");
    const cplx k = cplx(omega_a, bandwidth) / (4.0 * coupling);
    const cplx envelope = std::exp(cplx(-0.5 * bandwidth * t, -0.5 * omega_a * t));
    return envelope * ((0.5 + k) * std::exp(cplx(0.0, -coupling * t)) + (0.5 - k) * std::exp(cplx(0.0, coupling * t)));
}

// ---------------------------------------------------------------------------------------------
// Spectral inversion

struct SpectralOptions {
    double tail_tolerance{1e-8};   // target for the density mass outside the window
    double max_tail{1e-4};         // accepted after the window stops growing
    double max_window{1e6};        // in units of the form factor's width
    std::size_t max_panels{200000};
};

struct SpectralLine {
    double energy;
    double weight;
};

namespace detail {

// Real solutions of w - omega_a - Sigma(w) = 0 outside the continuum (bound states), with
// weights 1 / (1 - Sigma'(w)). f is increasing on each side of the support.
inline std::vector<SpectralLine> real_poles_outside(const LeeModel& model) {
    std::vector<SpectralLine> lines;
    const Support sup = support(model.ff);
    if (!std::isfinite(sup.lower) || !std::isfinite(sup.upper)) return lines;
    const double scale = std::max(1.0, bandwidth_scale(model.ff));
    auto f = [&](double w) { return w - model.omega_a - sigma_first(model.ff, cplx(w, 0.0)).value.real(); };
    auto solve = [&](double lo, double hi) {
        for (int it = 0; it < 400; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (f(mid) < 0.0 ? lo : hi) = mid;
        }
        const double w = 0.5 * (lo + hi);
        const double d = sigma_first(model.ff, cplx(w, 0.0)).derivative.real();
        lines.push_back({w, 1.0 / (1.0 - d)});
    };
    const double edge = 1e-12 * scale;
    const double reach = std::abs(model.omega_a - sup.lower) + std::abs(sup.upper - sup.lower) + scale;
    // below the continuum: f -> -inf at -inf
    if (f(sup.lower - edge) > 0.0) {
        double d = reach;
        while (f(sup.lower - d) >= 0.0) d *= 2.0;
        solve(sup.lower - d, sup.lower - edge);
    }
    // above the continuum: f -> +inf at +inf
    if (f(sup.upper + edge) < 0.0) {
        double d = reach;
        while (f(sup.upper + d) <= 0.0) d *= 2.0;
        solve(sup.upper + edge, sup.upper + d);
    }
    return lines;
}

} // namespace detail

/// A(t) = int rho(w) e^{-iwt} dw + sum over bound states, rho(w) = -Im G_a(w + i0) / pi,
/// integrated on Gauss-Legendre panels refined around the resonance.
class SpectralPropagator {
public:
    static SpectralPropagator build(const LeeModel& model, double t_max, const SpectralOptions& opt = {}) {
        if (!(t_max >= 0.0) || !std::isfinite(t_max)) fail(Errc::InvalidArgument, "t_max must be finite and >= 0");
        SpectralPropagator sp;
        sp.lines_ = detail::real_poles_outside(model);
        double mass = 0.0;
        for (const auto& l : sp.lines_) mass += l.weight;
        if (std::holds_alternative<Dirac>(model.ff)) {
            sp.normalization_ = mass;
            sp.tail_ = std::abs(1.0 - mass);
            return sp;
        }

        const double scale = bandwidth_scale(model.ff);
        const double kappa = tail_density(model.ff);
        if (kappa > 0.0) {
            // w^-2 tail handled analytically by a Lorentzian of equal tail weight
            sp.lorentz_ = Lorentz{model.omega_a, pi * kappa, 1.0};
            mass += 1.0;
        }

        std::vector<quad::Feature> features{{model.omega_a, scale / 20.0}};
        try {
            const PoleData pole = find_pole(model);
            features.push_back({pole.energy.real(), std::max(0.25 * pole.width, 1e-9 * scale)});
        } catch (const Error&) {
            // no trusted pole: refine around the golden-rule width instead
            try {
                const double g = golden_rule(model);
                if (g > 0.0) features.push_back({model.omega_a, std::max(0.25 * g, 1e-9 * scale)});
            } catch (const Error&) {
            }
        }

        auto rho = [&](double w) {
            const cplx s = sigma_boundary(model.ff, w, Side::Above).value;
            double r = -std::imag(1.0 / (w - model.omega_a - s)) / pi;
            if (sp.lorentz_) r -= sp.lorentz_->density(w);
            return r;
        };

        const Support sup = support(model.ff);
        const bool bounded = std::isfinite(sup.lower) && std::isfinite(sup.upper);
        if (bounded) {
            // threshold behaviour (e.g. sqrt) at the band edges
            features.push_back({sup.lower, 1e-6 * scale});
            features.push_back({sup.upper, 1e-6 * scale});
        }
        const double osc = t_max > 0.0 ? 8.0 / t_max : std::numeric_limits<double>::infinity();
        double half_window = std::abs(model.omega_a) + 20.0 * scale;
        for (;;) {
            const double lo = bounded ? sup.lower : -half_window;
            const double hi = bounded ? sup.upper : half_window;
            double max_width = std::min(osc, scale / 2.0);
            max_width = std::max(max_width, (hi - lo) / static_cast<double>(opt.max_panels));
            const auto breaks = quad::graded_breakpoints(lo, hi, features, max_width);
            const auto& rule = quad::fixed_rule<16>();
            sp.nodes_.clear();
            sp.weights_.clear();
            double cont = 0.0;
            for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
                const double half = 0.5 * (breaks[i + 1] - breaks[i]);
                const double mid = 0.5 * (breaks[i + 1] + breaks[i]);
                for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                    const double w = mid + half * rule.nodes[k];
                    const double v = rule.weights[k] * half * rho(w);
                    sp.nodes_.push_back(w);
                    sp.weights_.push_back(v);
                    cont += v;
                }
            }
            sp.normalization_ = mass + cont;
            sp.tail_ = std::abs(1.0 - sp.normalization_);
            if (bounded || sp.tail_ < opt.tail_tolerance) break;
            if (half_window * 4.0 > opt.max_window * scale) {
                if (sp.tail_ > opt.max_tail)
                    fail(Errc::SpectralWindowTooSmall, "spectral density mass outside the largest window exceeds tolerance");
                break;
            }
            half_window *= 4.0;
        }
        return sp;
    }

    cplx amplitude(double t) const {
        cplx sum = 0.0;
        for (std::size_t k = 0; k < nodes_.size(); ++k) sum += weights_[k] * std::exp(cplx(0.0, -nodes_[k] * t));
        for (const auto& l : lines_) sum += l.weight * std::exp(cplx(0.0, -l.energy * t));
        if (lorentz_) sum += lorentz_->weight * std::exp(cplx(-lorentz_->half_width * std::abs(t), -lorentz_->center * t));
        return sum / normalization_;
    }

    double normalization() const { return normalization_; }
    double tail_mass() const { return tail_; }
    const std::vector<SpectralLine>& lines() const { return lines_; }
    std::size_t node_count() const { return nodes_.size(); }

private:
    struct Lorentz {
        double center;
        double half_width;
        double weight;
        double density(double w) const {
            const double d = w - center;
            return weight * half_width / (pi * (d * d + half_width * half_width));
        }
    };

    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<SpectralLine> lines_;
    std::optional<Lorentz> lorentz_;
    double normalization_{1.0};
    double tail_{0.0};
};

inline SurvivalSeries amplitude_spectral(const LeeModel& model, const std::vector<double>& times,
                                         const SpectralOptions& opt = {}) {
    check_times(times);
    const double t_max = times.empty() ? 0.0 : times.back();
    const auto sp = SpectralPropagator::build(model, t_max, opt);
    auto s = tabulate_series(times, Method::Spectral, [&](double t) { return sp.amplitude(t); });
    s.normalization = sp.normalization();
    return s;
}

// ---------------------------------------------------------------------------------------------
// Best available exact evolution, used by the measurement analyses

/// Exact survival law of a model: closed forms where the model is solvable, spectral inversion otherwise.
class SurvivalLaw {
public:
    explicit SurvivalLaw(const LeeModel& model, double t_max = 0.0, const SpectralOptions& opt = {})
        : omega_a_(model.omega_a) {
        std::visit(
            overloaded{
                [&](const Lorentzian& f) {
                    if (f.coupling > 0.0) impl_ = two_pole_closed(f.coupling, f.bandwidth, model.omega_a);
                    else impl_ = Free{};
                    method_ = f.coupling > 0.0 ? Method::TwoPoleClosed : Method::WW;
                },
                [&](const FlatBand& f) {
                    impl_ = PureExponential{f.rate};
                    method_ = Method::WW;
                },
                [&](const Dirac& f) {
                    if (f.coupling > 0.0) impl_ = Rabi{f.coupling, f.location};
                    else impl_ = Free{};
                    method_ = f.coupling > 0.0 ? Method::Rabi : Method::WW;
                },
                [&](const Tabulated&) {
                    impl_ = SpectralPropagator::build(model, t_max, opt);
                    method_ = Method::Spectral;
                },
            },
            model.ff);
    }

    Method method() const { return method_; }

    cplx log_amplitude(double t) const {
        return std::visit(
            overloaded{
                [&](const TwoPoleParams& p) { return log_amplitude_two_pole(p, t); },
                [&](const PureExponential& p) { return cplx(-0.5 * p.rate * t, -omega_a_ * t); },
                [&](const Free&) { return cplx(0.0, -omega_a_ * t); },
                [&](const Rabi& r) {
                    const auto res = rabi_survival(r.coupling, omega_a_ - r.location, t);
                    return std::log(res.amplitude) + cplx(0.0, -r.location * t);
                },
                [&](const SpectralPropagator& sp) { return std::log(sp.amplitude(t)); },
            },
            impl_);
    }

    cplx amplitude(double t) const {
        if (const auto* p = std::get_if<TwoPoleParams>(&impl_)) return amplitude_two_pole(*p, t);
        if (const auto* r = std::get_if<Rabi>(&impl_))
            return rabi_survival(r->coupling, omega_a_ - r->location, t).amplitude * std::exp(cplx(0.0, -r->location * t));
        if (const auto* sp = std::get_if<SpectralPropagator>(&impl_)) return sp->amplitude(t);
        return std::exp(log_amplitude(t));
    }

    double probability(double t) const { return std::norm(amplitude(t)); }

    /// log P(t), finite after P itself underflows; -inf where the amplitude vanishes to rounding.
    double log_probability(double t) const {
        constexpr double kZero = 1e-14;
        if (const auto* p = std::get_if<TwoPoleParams>(&impl_)) {
            const double beat = std::abs(detail::two_pole_beat(*p, t));
            if (beat < kZero) return -std::numeric_limits<double>::infinity();
            return 2.0 * (p->e1.imag() * t + std::log(beat));
        }
        if (std::holds_alternative<PureExponential>(impl_) || std::holds_alternative<Free>(impl_))
            return 2.0 * log_amplitude(t).real();
        const double a = std::abs(amplitude(t));
        if (a < kZero) return -std::numeric_limits<double>::infinity();
        return 2.0 * std::log(a);
    }

private:
    struct PureExponential {
        double rate;
    };
    struct Free {};
    struct Rabi {
        double coupling;
        double location;
    };

    double omega_a_;
    Method method_{Method::TwoPoleClosed};
    std::variant<TwoPoleParams, PureExponential, Free, Rabi, SpectralPropagator> impl_;
};

} // namespace leezeno
