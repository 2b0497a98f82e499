// zeno.hpp - Effective decay rates under pulsed and continuous measurement, the crossing
// time tau* and the Zeno / Heraclitus classification

#pragma once

#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "leezeno/error.hpp"
#include "leezeno/form_factor.hpp"
#include "leezeno/poles.hpp"
#include "leezeno/spectral.hpp"
#include "leezeno/survival.hpp"

namespace leezeno {

enum class Regime { Zeno, Natural, Heraclitus };

constexpr std::string_view to_string(Regime r) noexcept {
    switch (r) {
    case Regime::Zeno: return "Zeno";
    case Regime::Natural: return "Natural";
    case Regime::Heraclitus: return "Heraclitus";
    }
    return "unknown";
}

/// Measurement protocol: projective pulses every tau, or an apparatus of response rate Gamma.
struct MeasurementSchedule {
    enum class Kind { Pulsed, Continuous } kind{Kind::Pulsed};
    double value{};  // tau for Pulsed, Gamma for Continuous

    static MeasurementSchedule pulsed(double tau) {
        if (!(tau > 0.0)) fail(Errc::InvalidArgument, "pulse interval must be > 0");
        return {Kind::Pulsed, tau};
    }
    static MeasurementSchedule continuous(double rate) {
        if (!(rate >= 0.0)) fail(Errc::InvalidArgument, "measurement rate must be >= 0");
        return {Kind::Continuous, rate};
    }
};

/// Exact decay rate gamma = -2 Im E_pole (pure exponential rate for the flat band).
inline double natural_rate(const LeeModel& model) {
    if (const auto* f = std::get_if<FlatBand>(&model.ff)) return f->rate;
    if (const auto* f = std::get_if<Lorentzian>(&model.ff); f && f->coupling == 0.0) return 0.0;
    return find_pole(model).width;
}

// ---------------------------------------------------------------------------------------------
// Pulsed measurements

/// gamma_eff(tau) = -log P(tau) / tau.
inline double effective_rate_pulsed(const SurvivalLaw& law, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) fail(Errc::InvalidArgument, "tau must be finite and > 0");
    const double lp = law.log_probability(tau);
    if (!std::isfinite(lp)) fail(Errc::RateInfinite, "survival probability vanishes at this tau");
    return -lp / tau;
}

inline double effective_rate_pulsed(const LeeModel& model, double tau) {
    return effective_rate_pulsed(SurvivalLaw(model, tau), tau);
}

struct PulsedSurvival {
    double probability;  // P(tau)^N
    double via_rate;     // exp(-gamma_eff(tau) N tau)
    double gamma_eff;
};

inline PulsedSurvival pulsed_survival(const SurvivalLaw& law, double tau, long long n) {
    if (n < 1) fail(Errc::InvalidArgument, "number of measurements must be >= 1");
    const double g = effective_rate_pulsed(law, tau);
    const double nn = static_cast<double>(n);
    return {std::exp(nn * law.log_probability(tau)), std::exp(-g * nn * tau), g};
}

inline PulsedSurvival pulsed_survival(const LeeModel& model, double tau, long long n) {
    return pulsed_survival(SurvivalLaw(model, tau), tau, n);
}

inline Regime classify_rate(double gamma_eff, double gamma) {
    const double eps = 1e-9 * gamma;
    if (gamma_eff < gamma - eps) return Regime::Zeno;
    if (gamma_eff > gamma + eps) return Regime::Heraclitus;
    return Regime::Natural;
}

inline Regime regime_classify(const LeeModel& model, double tau) {
    return classify_rate(effective_rate_pulsed(model, tau), natural_rate(model));
}

struct TauStarOptions {
    std::size_t grid_points{400};
    double lower{1e-4};          // first grid point, in units of 1 / bandwidth
    double relative_tolerance{1e-8};
};

namespace detail {

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

} // namespace detail

/// Every tau in [lower / bandwidth, tau_max] where gamma_eff(tau) crosses gamma, ascending.
inline std::vector<double> find_tau_star(const SurvivalLaw& law, double gamma, double tau_lo, double tau_max,
                                         const TauStarOptions& opt = {}) {
    if (!(tau_max > tau_lo) || !(tau_lo > 0.0)) fail(Errc::InvalidArgument, "need 0 < tau_lo < tau_max");
    if (opt.grid_points < 2) fail(Errc::InvalidArgument, "crossing grid needs at least two points");
    const double eps = 1e-9 * gamma;
    auto h = [&](double tau) { return effective_rate_pulsed(law, tau) - gamma; };
    auto sign = [&](double v) { return std::abs(v) <= eps ? 0 : (v > 0.0 ? 1 : -1); };

    std::vector<double> stars;
    const auto grid = detail::log_grid(tau_lo, tau_max, opt.grid_points);
    int last_sign = 0;
    double last_tau = 0.0;
    for (double tau : grid) {
        int s = 0;
        try {
            s = sign(h(tau));
        } catch (const Error& e) {
            if (e.code() != Errc::RateInfinite) throw;
            s = 1;  // a survival node is an infinitely fast effective decay
        }
        if (s == 0) continue;
        if (last_sign != 0 && s != last_sign) {
            double lo = last_tau, hi = tau;
            while (hi - lo > opt.relative_tolerance * hi) {
                const double mid = 0.5 * (lo + hi);
                int sm;
                try {
                    sm = sign(h(mid));
                } catch (const Error& e) {
                    if (e.code() != Errc::RateInfinite) throw;
                    sm = 1;
                }
                if (sm == 0) {
                    lo = hi = mid;
                    break;
                }
                (sm == last_sign ? lo : hi) = mid;
            }
            stars.push_back(0.5 * (lo + hi));
        }
        last_sign = s;
        last_tau = tau;
    }
    return stars;
}

inline std::vector<double> find_tau_star(const LeeModel& model, double tau_max, const TauStarOptions& opt = {}) {
    const double gamma = natural_rate(model);
    const double lo = opt.lower / bandwidth_scale(model.ff);
    return find_tau_star(SurvivalLaw(model, tau_max), gamma, lo, tau_max, opt);
}

struct SufficientCondition {
    double z;                                  // |1 - R|^2 at the resonance pole
    bool holds;                                // Z < 1
    std::optional<bool> weak_coupling_check;   // omega_a^2 > Lambda^2, Lorentzian only
};

inline SufficientCondition sufficient_condition(const LeeModel& model) {
    SufficientCondition out{};
    if (const auto* f = std::get_if<Lorentzian>(&model.ff)) {
        out.weak_coupling_check = model.omega_a * model.omega_a > f->bandwidth * f->bandwidth;
        if (f->coupling == 0.0) {
            out.z = 1.0;
            out.holds = false;
            return out;
        }
    }
    if (std::holds_alternative<FlatBand>(model.ff)) out.z = 1.0;
    else out.z = find_pole(model).renormalization;
    out.holds = out.z < 1.0;
    return out;
}

// ---------------------------------------------------------------------------------------------
// Continuous measurement

/// Decay rate of the pole of E - omega_a - Sigma(E + i Gamma / 2).
inline double continuous_rate(const LeeModel& model, double measurement_rate) {
    const auto sched = MeasurementSchedule::continuous(measurement_rate);
    if (const auto* f = std::get_if<FlatBand>(&model.ff)) return f->rate;
    PoleSearchOptions opt;
    opt.measurement_rate = sched.value;
    return find_pole(model, opt).width;
}

/// Large-Gamma asymptote 4 / (tau_Z^2 Gamma).
inline double continuous_rate_asymptote(const LeeModel& model, double measurement_rate) {
    const double tz = zeno_time(model.ff);
    return 4.0 / (tz * tz * measurement_rate);
}

// ---------------------------------------------------------------------------------------------
// Report

struct ZenoReport {
    std::vector<double> taus;
    std::vector<double> gamma_eff;
    std::vector<Regime> regimes;
    double gamma_natural{};
    std::optional<double> golden_rule;
    double z{1.0};
    bool condition_holds{false};
    std::vector<double> tau_stars;
    double tau_max{};
};

inline ZenoReport zeno_report(const LeeModel& model, const std::vector<double>& taus, double tau_max,
                              const TauStarOptions& opt = {}) {
    check_times(taus);
    if (taus.empty() || !(taus.front() > 0.0)) fail(Errc::InvalidArgument, "tau grid must be non-empty and > 0");
    ZenoReport r;
    r.taus = taus;
    r.tau_max = tau_max;
    r.gamma_natural = natural_rate(model);
    try {
        r.golden_rule = golden_rule(model);
    } catch (const Error&) {
    }
    const auto cond = sufficient_condition(model);
    r.z = cond.z;
    r.condition_holds = cond.holds;
    const SurvivalLaw law(model, std::max(tau_max, taus.back()));
    for (double tau : taus) {
        const double g = effective_rate_pulsed(law, tau);
        r.gamma_eff.push_back(g);
        r.regimes.push_back(classify_rate(g, r.gamma_natural));
    }
    r.tau_stars = find_tau_star(law, r.gamma_natural, opt.lower / bandwidth_scale(model.ff), tau_max, opt);
    return r;
}

} // namespace leezeno
