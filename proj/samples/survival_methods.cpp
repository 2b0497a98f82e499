// survival_methods.cpp - The same survival amplitude four ways: closed form, spectral inversion,
// discretized continuum and the single-pole approximation

#include <cstdio>
#include <vector>

#include "leezeno/leezeno.hpp"

using namespace leezeno;

int main() {
    const LeeModel m{1.0, make_lorentzian(0.1, 1.0)};
    const std::vector<double> times{0.0, 0.5, 2.0, 10.0, 100.0, 500.0};

    const auto closed = series_two_pole(two_pole_closed(0.1, 1.0, 1.0), times);
    const auto spectral = amplitude_spectral(m, times);
    const auto discrete = amplitude_oracle(m, 2000, times);
    const auto ww = weisskopf_wigner(m);

    std::printf("%8s %20s %20s %20s %20s\n", "t", "two-pole", "spectral", "oracle N=2000", "single pole");
    for (std::size_t i = 0; i < times.size(); ++i)
        std::printf("%8g %20.15f %20.15f %20.15f %20.15f\n", times[i], closed.probability[i], spectral.probability[i],
                    discrete.probability[i], std::norm(ww.amplitude(times[i])));

    // the single-pole curve has no quadratic region: it leaves 1 linearly
    const auto pole = find_pole(m);
    std::printf("pole E = %.12f %+.12fi, Z = %.12f, tau_Z = %g\n", pole.energy.real(), pole.energy.imag(), pole.renormalization,
                zeno_time(m.ff));
}
