// threshold_continuum.cpp - A continuum with a band edge, given only as samples: pole, reduction and Zeno crossover

#include <cmath>
#include <cstdio>
#include <vector>

#include "leezeno/leezeno.hpp"

using namespace leezeno;

int main() {
    // g^2(w) = c sqrt(w) exp(-w / wc) on [0, 40 wc], as a measured density would arrive
    const double c = 0.05, wc = 1.0;
    std::vector<double> w(4001), g2(4001);
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = 40.0 * wc * static_cast<double>(i) / 4000.0;
        g2[i] = c * std::sqrt(w[i]) * std::exp(-w[i] / wc);
    }
    const LeeModel m{0.5, make_tabulated(w, g2)};

    const auto pole = find_pole(m);
    std::printf("golden rule %.8g, pole width %.8g, Z %.8f\n", golden_rule(m), pole.width, pole.renormalization);

    const auto red = two_pole_reduce(m.ff, m.omega_a);
    std::printf("two-pole surrogate: lambda_eff %.6g, Lambda_eff %.6g\n", red.lambda_eff, red.Lambda_eff);

    const SurvivalLaw law(m, 2e3);
    const auto stars = find_tau_star(law, pole.width, 1e-3, 2e3);
    // Z > 1 near the edge, so no crossing in the Zeno region; the ones found sit where
    // the slow band-edge tail overtakes the pole term and P oscillates around e^{-gamma t}
    std::printf("%zu crossings, first at tau = %.8g\n", stars.size(), stars.empty() ? 0.0 : stars.front());
    for (double t : {0.1, 1.0, 10.0, 100.0})
        std::printf("P(%g) = %.10f   surrogate %.10f\n", t, law.probability(t),
                    probability_two_pole(two_pole_closed(red.lambda_eff, red.Lambda_eff, 0.0), t));
}
