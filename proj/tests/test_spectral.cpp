// test_spectral.cpp - Form-factor catalog and scalar model quantities

#include <gtest/gtest.h>

#include <cmath>

#include "leezeno/leezeno.hpp"
#include "support/models.hpp"
#include "support/oracles.hpp"

using namespace leezeno;

using fixtures::error_code;

TEST(Density, CatalogValues) {
    EXPECT_NEAR(eval_density(make_lorentzian(0.1, 1.0), 0.0), 0.01 / pi, 1e-18);
    EXPECT_NEAR(eval_density(make_lorentzian(0.1, 1.0), 0.0), 3.1831e-3, 1e-7);
    EXPECT_NEAR(eval_density(make_flat_band(0.05), 7.3), 0.05 / (2 * pi), 1e-18);
    EXPECT_NEAR(eval_density(make_flat_band(0.05), 7.3), 7.9577e-3, 1e-7);
    EXPECT_EQ(error_code([] { eval_density(make_dirac(0.5, 0.0), 0.0); }), Errc::DensityNotPointwise);
}

TEST(Density, TabulatedIsZeroOutsideGridAndInterpolatesSamples) {
    const auto ff = fixtures::lorentzian_table(0.1, 1.0, 201, -10.0, 10.0);
    EXPECT_EQ(eval_density(ff, -10.5), 0.0);
    EXPECT_EQ(eval_density(ff, 11.0), 0.0);
    const auto& t = std::get<Tabulated>(ff);
    for (std::size_t i = 0; i < t.omega().size(); ++i) EXPECT_NEAR(t(t.omega()[i]), t.g2()[i], 1e-17);
    EXPECT_NEAR(t(0.05), oracle::lorentzian(0.1, 1.0, 0.05), 5e-6);  // flattened slope at the peak
}

TEST(Density, ConstructorsRejectInvalidInput) {
    EXPECT_EQ(error_code([] { make_lorentzian(0.1, 0.0); }), Errc::InvalidArgument);
    EXPECT_EQ(error_code([] { make_flat_band(-1.0); }), Errc::InvalidArgument);
    EXPECT_EQ(error_code([] { make_tabulated({0.0, 1.0, 1.0}, {1.0, 1.0, 1.0}); }), Errc::InvalidArgument);
    EXPECT_EQ(error_code([] { make_tabulated({0.0, 1.0}, {1.0, -1.0}); }), Errc::InvalidArgument);
    EXPECT_EQ(error_code([] { make_tabulated({0.0, NAN}, {1.0, 1.0}); }), Errc::InvalidArgument);
}

TEST(Density, NonNegativeEverywhereOnSupport) {
    // monotone interpolation of a spiky non-negative table stays non-negative
    const auto ff = make_tabulated({0, 1, 2, 3, 4, 5}, {0, 5, 0, 0, 3, 0});
    for (double w = -1.0; w <= 6.0; w += 1e-3) EXPECT_GE(eval_density(ff, w), 0.0);
}

TEST(ZenoTime, CatalogValues) {
    EXPECT_NEAR(zeno_time(make_lorentzian(0.1, 1.0)), 10.0, 1e-12);
    EXPECT_NEAR(zeno_time(make_dirac(0.5, 0.0)), 2.0, 1e-12);
    EXPECT_EQ(error_code([] { zeno_time(make_flat_band(0.01)); }), Errc::SecondMomentDivergent);
}

TEST(ZenoTime, LorentzianIntegralByIndependentQuadrature) {
    for (double lam : {0.05, 0.1, 1.0}) {
        for (double bw : {0.5, 1.0, 3.0}) {
            const auto ff = make_lorentzian(lam, bw);
            const double q = oracle::integrate([&](double w) { return eval_density(ff, w); },
                                               -std::numeric_limits<double>::infinity(),
                                               std::numeric_limits<double>::infinity());
            EXPECT_NEAR(q, lam * lam, 1e-10 * lam * lam);
            EXPECT_NEAR(total_coupling(ff), lam * lam, 1e-15);
        }
    }
}

TEST(ZenoTime, TabulatedMatchesIndependentQuadrature) {
    const auto ff = fixtures::threshold_table(0.2, 1.5, 801);
    const auto& t = std::get<Tabulated>(ff);
    double q = 0.0;
    for (std::size_t i = 0; i + 1 < t.omega().size(); ++i)
        q += oracle::integrate([&](double w) { return t(w); }, t.omega()[i], t.omega()[i + 1]);
    EXPECT_NEAR(zeno_time(ff), 1.0 / std::sqrt(q), 1e-12);
}

TEST(ZenoTime, ScaleCovariance) {
    fixtures::Gen gen(7);
    for (double c : {0.5, 2.0, 10.0}) {
        const double lam = gen.log_uniform(0.01, 1.0), bw = gen.log_uniform(0.1, 10.0);
        EXPECT_NEAR(zeno_time(make_lorentzian(c * lam, bw)), zeno_time(make_lorentzian(lam, bw)) / c,
                    1e-12 * zeno_time(make_lorentzian(lam, bw)));
        EXPECT_NEAR(zeno_time(make_dirac(c * lam, 0.3)), zeno_time(make_dirac(lam, 0.3)) / c, 1e-12 / lam);
        const auto base = fixtures::threshold_table(0.2, 1.0, 301);
        const auto& t = std::get<Tabulated>(base);
        std::vector<double> w(t.omega().begin(), t.omega().end()), g(t.g2().begin(), t.g2().end());
        for (double& v : g) v *= c * c;
        const auto scaled = make_tabulated(w, g);
        EXPECT_NEAR(zeno_time(scaled), zeno_time(base) / c, 1e-12 * zeno_time(base));
    }
}

TEST(GoldenRule, CatalogValues) {
    EXPECT_NEAR(golden_rule({1.0, make_lorentzian(0.1, 1.0)}), 0.01, 1e-15);
    EXPECT_NEAR(golden_rule({0.0, make_lorentzian(0.1, 1.0)}), 0.02, 1e-15);
    EXPECT_NEAR(golden_rule({-3.0, make_flat_band(0.05)}), 0.05, 1e-15);
    EXPECT_NEAR(golden_rule({42.0, make_flat_band(0.05)}), 0.05, 1e-15);
    EXPECT_EQ(error_code([] { golden_rule({0.0, make_dirac(0.5, 0.0)}); }), Errc::GoldenRuleUndefined);
}

TEST(SecondOrderShift, LorentzianClosedForm) {
    EXPECT_NEAR(second_order_shift({1.0, make_lorentzian(0.1, 1.0)}), 0.005, 1e-15);
    // closed form against an independent principal-value quadrature of the density
    for (double wa : {-2.0, 0.3, 1.0, 4.0}) {
        const double pv = oracle::principal_value([](double w) { return oracle::lorentzian(0.1, 1.0, w); }, wa, -1e5, 1e5);
        EXPECT_NEAR(second_order_shift({wa, make_lorentzian(0.1, 1.0)}), pv, 1e-9) << wa;
    }
}

TEST(SecondOrderShift, SymmetricDensityAtOriginVanishes) {
    EXPECT_EQ(second_order_shift({0.0, make_lorentzian(0.3, 2.0)}), 0.0);
    EXPECT_EQ(second_order_shift({0.0, make_flat_band(0.1)}), 0.0);
    EXPECT_NEAR(second_order_shift({0.0, fixtures::lorentzian_table(0.3, 2.0, 1001, -30.0, 30.0)}), 0.0, 1e-15);
}

TEST(SecondOrderShift, TabulatedLorentzianSamples) {
    const auto ff = fixtures::lorentzian_table(0.1, 1.0, 10000, -50.0, 50.0);
    const double shift = second_order_shift({1.0, ff});
    EXPECT_NEAR(shift, 0.005, 1e-4);
    // the symmetric-pair route against the subtraction route on the same interpolant
    const auto& t = std::get<Tabulated>(ff);
    const std::vector<double> breaks(t.omega().begin(), t.omega().end());
    const double pv = oracle::principal_value_pieces([&](double w) { return t(w); }, 1.0, breaks);
    EXPECT_NEAR(shift, pv, 1e-9);
}

TEST(SecondOrderShift, TabulatedAwayFromGridIsUnresolvable) {
    const auto ff = fixtures::lorentzian_table(0.1, 1.0, 101, -5.0, 5.0);
    EXPECT_EQ(error_code([&] { second_order_shift({7.0, ff}); }), Errc::PrincipalValueUnresolvable);
    EXPECT_NEAR(second_order_shift({0.5, make_dirac(0.2, 1.5)}), 0.04 / (0.5 - 1.5), 1e-15);
    EXPECT_EQ(error_code([] { second_order_shift({1.5, make_dirac(0.2, 1.5)}); }), Errc::AtPole);
}

TEST(Continuity, GoldenRuleAndShiftAreSmoothInOmegaA) {
    const auto tab = fixtures::lorentzian_table(0.2, 1.0, 2001, -20.0, 20.0);
    for (const auto& ff : {make_lorentzian(0.2, 1.0), tab}) {
        for (double x : {-1.3, 0.1, 0.77, 2.5}) {
            const double h = 1e-3;
            auto gr = [&](double w) { return golden_rule({w, ff}); };
            auto sh = [&](double w) { return second_order_shift({w, ff}); };
            // second differences of a C^1 function shrink like h^2 times the curvature scale
            EXPECT_LT(std::abs(gr(x + h) - 2 * gr(x) + gr(x - h)), 1e-5) << x;
            EXPECT_LT(std::abs(sh(x + h) - 2 * sh(x) + sh(x - h)), 1e-5) << x;
            EXPECT_LT(std::abs(sh(x + 1e-7) - sh(x)), 1e-7) << x;
        }
    }
}
