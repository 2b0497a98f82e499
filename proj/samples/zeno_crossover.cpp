// zeno_crossover.cpp - Where pulsed measurement stops slowing decay and starts speeding it up

#include <cstdio>
#include <string>

#include "leezeno/leezeno.hpp"

using namespace leezeno;

int main() {
    const double lambda = 0.1, bandwidth = 1.0;
    std::printf("%8s %12s %12s %14s %14s\n", "w/L", "gamma", "Z", "tau*", "gamma tau_Z^2");
    for (double ratio : {0.2, 1.0, 2.0, 4.0, 10.0}) {
        const LeeModel m{ratio * bandwidth, make_lorentzian(lambda, bandwidth)};
        const double g = natural_rate(m);
        const double tz = zeno_time(m.ff);
        const auto cond = sufficient_condition(m);
        const auto stars = find_tau_star(m, 1e3 / g);
        std::printf("%8.2f %12.6g %12.8f ", ratio, g, cond.z);
        if (stars.empty()) std::printf("%14s", "none");
        else std::printf("%14.6g", stars.front());
        std::printf(" %14.6g\n", g * tz * tz);
    }

    // below tau* the measured system decays slower than gamma, above it faster
    const LeeModel m{4.0, make_lorentzian(lambda, bandwidth)};
    const SurvivalLaw law(m);
    const double g = natural_rate(m);
    for (double tau : {0.01, 0.1, 1.0, 10.0}) {
        const double ge = effective_rate_pulsed(law, tau);
        std::printf("tau=%-6g gamma_eff/gamma=%.6f  %s\n", tau, ge / g, std::string(to_string(classify_rate(ge, g))).c_str());
    }
}
