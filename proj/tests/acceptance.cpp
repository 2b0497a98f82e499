// acceptance.cpp - Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all selected pass
//
// usage: acceptance [--criterion N]...   (no argument runs all twelve)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "leezeno/io.hpp"
#include "leezeno/leezeno.hpp"

using namespace leezeno;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

const LeeModel reference{1.0, make_lorentzian(0.1, 1.0)};

// 1. closed-form two-pole amplitude against the discretized continuum
Verdict two_pole_exactness() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto times = linspace(0.0, 50.0, 1001);
    const auto exact = series_two_pole(two_pole_closed(0.1, 1.0, 1.0), times);
    const auto orc = amplitude_oracle(reference, 4000, times);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) worst = std::max(worst, std::abs(exact.amplitude[i] - orc.amplitude[i]));
    const double dt = seconds_since(t0);
    return {worst < 1e-5 && dt < 30.0, "max |A_closed - A_oracle| = " + sci(worst) + " over 1001 times, " + sci(dt) + " s"};
}

// 2. pole width against the golden rule, relative gap below 10 lambda^2
Verdict golden_rule_convergence() {
    bool ok = true;
    std::ostringstream d;
    for (double w : {0.5, 1.0, 4.0})
        for (double l : {1e-2, 1e-3}) {
            const LeeModel m{w, make_lorentzian(l, 1.0)};
            const double g = find_pole(m).width;
            const double rel = std::abs(g - golden_rule(m)) / g;
            ok = ok && rel < 10.0 * l * l;
            d << "w=" << w << ",l=" << l << ": " << sci(rel / (l * l)) << " l^2; ";
        }
    return {ok, d.str()};
}

// 3. 1 - P = t^2 / tau_Z^2 at t = 1e-3 / Lambda
Verdict quadratic_law() {
    const double tz = zeno_time(reference.ff), t = 1e-3;
    const double closed = (1.0 - probability_two_pole(two_pole_closed(0.1, 1.0, 1.0), t)) * tz * tz / (t * t);
    const auto orc = amplitude_oracle(reference, 4000, {t});
    const double discrete = (1.0 - orc.probability[0]) * tz * tz / (t * t);
    const bool ok = std::abs(closed - 1.0) <= 0.01 && std::abs(discrete - 1.0) <= 0.01;
    return {ok, "(1-P) tau_Z^2 / t^2 = " + io::fmt(closed) + " (closed), " + io::fmt(discrete) + " (oracle)"};
}

// 4. the quadratic law is already off well before t reaches tau_Z
Verdict zeno_region_shorter_than_zeno_time() {
    const auto p = two_pole_closed(0.1, 1.0, 1.0);
    const double tz = zeno_time(reference.ff);
    auto rel = [&](double t) { return std::abs(probability_two_pole(p, t) - (1.0 - t * t / (tz * tz))) / (t * t); };
    const double early = rel(0.1), late = rel(2.0);
    return {late > 10.0 * early, "t^-2 |P - (1 - t^2/tau_Z^2)|: " + sci(early) + " at t=0.1, " + sci(late) + " at t=2 (tau_Z = " +
                                     sci(tz) + ")"};
}

// 5. a flat continuum is blind to measurement, pulsed or continuous
Verdict flat_band_immunity() {
    double worst = 0.0;
    for (double gamma : {0.01, 0.3, 2.0}) {
        const LeeModel m{0.7, make_flat_band(gamma)};
        for (double tau : detail::log_grid(1e-4, 1e4, 41)) worst = std::max(worst, std::abs(effective_rate_pulsed(m, tau) / gamma - 1.0));
        for (double g : detail::log_grid(1e-4, 1e4, 41)) worst = std::max(worst, std::abs(continuous_rate(m, g) / gamma - 1.0));
        worst = std::max(worst, std::abs(continuous_rate(m, 0.0) / gamma - 1.0));
    }
    return {worst <= 1e-10, "max relative deviation " + sci(worst) + " over 3 rates x (41 tau + 42 Gamma)"};
}

// 6. Z < 1 forces a crossing; on resonance there is none
Verdict transition_existence() {
    bool ok = true;
    std::ostringstream d;
    for (double ratio : {2.0, 4.0, 10.0}) {
        const LeeModel m{ratio, make_lorentzian(0.1, 1.0)};
        const double g = natural_rate(m);
        const auto stars = find_tau_star(m, 1e3 / g);
        const SurvivalLaw law(m);
        const double res = stars.empty() ? INFINITY : std::abs(law.probability(stars[0]) - std::exp(-g * stars[0]));
        ok = ok && sufficient_condition(m).z < 1.0 && res < 1e-8;
        d << "w/L=" << ratio << ": tau*=" << (stars.empty() ? "none" : sci(stars[0])) << " residual " << sci(res) << "; ";
    }
    const LeeModel res0{0.0, make_lorentzian(0.1, 1.0)};
    const auto none = find_tau_star(res0, 1e3 / natural_rate(res0));
    ok = ok && none.empty();
    d << "w=0: " << none.size() << " crossings";
    return {ok, d.str()};
}

// 7. the first crossing sits near gamma tau_Z^2
Verdict jump_time() {
    const LeeModel m{10.0, make_lorentzian(0.1, 1.0)};
    const double g = natural_rate(m), tz = zeno_time(m.ff);
    const auto stars = find_tau_star(m, 1e3 / g);
    if (stars.empty()) return {false, "no crossing"};
    const double est = g * tz * tz;
    const double rel = std::abs(stars[0] / est - 1.0);
    return {rel < 0.1, "tau* = " + io::fmt(stars[0]) + ", gamma tau_Z^2 = " + io::fmt(est) + ", relative gap " + sci(rel)};
}

// 8. strong continuous measurement: gamma_eff -> 4 / (tau_Z^2 Gamma)
Verdict continuous_asymptote() {
    const double gm = 100.0, tz = zeno_time(reference.ff);
    const double ge = continuous_rate(reference, gm);
    const double dev = std::abs(ge * tz * tz * gm / 4.0 - 1.0);
    return {dev < 0.05, "gamma_eff tau_Z^2 Gamma / 4 - 1 = " + sci(dev)};
}

// 9. single-mode limit. The formula check passes; the zero is at pi / (2 lambda), not pi / lambda.
Verdict rabi_limit() {
    double worst = 0.0;
    for (double l : {0.1, 0.5, 2.0})
        for (double w0 : {0.0, 0.7})
            for (double wa : {0.0, 0.3, -1.5}) {
                const SurvivalLaw law({wa, make_dirac(l, w0)});
                const double det = wa - w0;
                const double om = std::sqrt(l * l + 0.25 * det * det);
                for (double t : linspace(0.0, 50.0, 501)) {
                    const double s = std::sin(om * t);
                    worst = std::max(worst, std::abs(law.probability(t) - (1.0 - l * l / (om * om) * s * s)));
                }
            }
    const double l = 0.1;
    const SurvivalLaw law({0.0, make_dirac(l, 0.0)});
    const double at_pi = law.probability(pi / l), at_half = law.probability(0.5 * pi / l);
    const bool formula = worst < 1e-12, zero = at_pi < 1e-12;
    return {formula && zero, "formula max deviation " + sci(worst) + (formula ? " (ok)" : " (FAIL)") + "; P(pi/lambda) = " + sci(at_pi) +
                                 (zero ? " (ok)" : " (FAIL)") + ", P(pi/(2 lambda)) = " + sci(at_half)};
}

// 10. the exponential era extrapolates back to Z, not 1. Fitted on the closed form and on the
// spectral inversion, which knows nothing about the two-pole structure.
Verdict asymptotic_renormalization() {
    const auto p = find_pole(reference);
    const double g = p.width, log_z = std::log(p.renormalization);
    const auto times = linspace(5.0 / g, 10.0 / g, 201);
    auto fit = [&](const std::vector<double>& logp) {
        // least squares for log P = a + b t
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            sx += times[i];
            sy += logp[i];
            sxx += times[i] * times[i];
            sxy += times[i] * logp[i];
        }
        const double n = static_cast<double>(times.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double icpt = (sy - slope * sx) / n;
        return std::pair{std::abs(-slope / g - 1.0), std::abs(icpt - log_z)};
    };
    const SurvivalLaw law(reference);
    std::vector<double> closed, spectral;
    for (double t : times) closed.push_back(2.0 * law.log_amplitude(t).real());
    for (double pr : amplitude_spectral(reference, times).probability) spectral.push_back(std::log(pr));
    const auto [s1, i1] = fit(closed);
    const auto [s2, i2] = fit(spectral);
    const bool ok = s1 < 1e-3 && i1 < 1e-3 && s2 < 1e-3 && i2 < 1e-3;
    return {ok, "closed form: slope " + sci(s1) + ", intercept " + sci(i1) + "; spectral: slope " + sci(s2) + ", intercept " + sci(i2) +
                    " (log Z = " + sci(log_z) + ")"};
}

// 11. the 2x2 non-Hermitian generator reproduces the two poles and the amplitude
Verdict matrix_equivalence() {
    double ev_err = 0.0, amp_err = 0.0;
    for (double l : {0.1, 0.3, 2.0})
        for (double w : {0.0, 1.0, 4.0}) {
            const auto m = effective_2x2(l, 1.0, w);
            const auto p = two_pole_closed(l, 1.0, w);
            const auto ev = eigenvalues_2x2(m);
            ev_err = std::max({ev_err, std::abs(ev[0] - p.e1), std::abs(ev[1] - p.e2)});
            for (double t : linspace(0.0, 50.0, 501)) amp_err = std::max(amp_err, std::abs(evolve_2x2(m, t) - amplitude_two_pole(p, t)));
        }
    return {ev_err < 1e-12 && amp_err < 1e-10, "eigenvalue error " + sci(ev_err) + ", (a,a) amplitude error " + sci(amp_err)};
}

// 12. the property suites of every module, run from their test binaries
Verdict property_suites() {
    const std::vector<std::pair<const char*, const char*>> suites{
        {"test_spectral", "Density.NonNegativeEverywhereOnSupport:ZenoTime.ScaleCovariance:Continuity.*"},
        {"test_self_energy", "SigmaProperties.*:SigmaSecond.ContinuityAcrossTheCut:SigmaBoundary.*"},
        {"test_poles", "PoleProperties.*"},
        {"test_survival", "SurvivalProperty.*"},
        {"test_oracle", "Oracle.Completeness:Oracle.UnitaryEvolution:Diagonalize.RandomArrowheadAgainstDenseOracle"},
        {"test_zeno", "ZenoProperty.*"},
        {"test_reduction", "CascadeProperty.*:Matrix2x2.TraceProperty"},
        {"test_cli", "CliProperty.*"},
    };
    bool ok = true;
    std::ostringstream d;
    for (const auto& [bin, filter] : suites) {
        const std::string cmd = std::string("\"") + LEEZENO_TEST_BIN_DIR + "/" + bin + "\" --gtest_filter='" + filter + "' >/dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        ok = ok && rc == 0;
        d << bin << (rc == 0 ? " ok" : " FAILED") << "; ";
    }
    return {ok, d.str()};
}

struct Criterion {
    const char* title;
    std::function<Verdict()> run;
};

const std::vector<Criterion> criteria{
    {"two-pole exactness", two_pole_exactness},
    {"golden rule convergence", golden_rule_convergence},
    {"Zeno quadratic law", quadratic_law},
    {"Zeno time vs Zeno region", zeno_region_shorter_than_zeno_time},
    {"flat-band immunity", flat_band_immunity},
    {"transition existence", transition_existence},
    {"jump-time estimate", jump_time},
    {"continuous asymptote", continuous_asymptote},
    {"Rabi limit", rabi_limit},
    {"asymptotic renormalization", asymptotic_renormalization},
    {"matrix equivalence", matrix_equivalence},
    {"property suites", property_suites},
};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) {
            const int n = std::atoi(argv[++i]);
            if (n < 1 || n > static_cast<int>(criteria.size())) {
                std::fprintf(stderr, "criterion must be 1..%zu\n", criteria.size());
                return 2;
            }
            selected.push_back(n);
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion N]...\n");
            return 2;
        }
    }
    if (selected.empty())
        for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) selected.push_back(n);

    bool all = true;
    for (int n : selected) {
        const auto& c = criteria[n - 1];
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw ") + e.what()};
        }
        all = all && v.pass;
        std::printf("criterion %2d %-28s %s  %s\n", n, c.title, v.pass ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
