#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <vector>

#include "laguerre/moments.hpp"
#include "laguerre/rates.hpp"
#include "laguerre/rng.hpp"

using namespace laguerre;

namespace {

/// Moments m_1..m_K of g(x) mu_sc(dx) for a polynomial g.
MomentSequence moments_of_density(const Polynomial& g, std::size_t order) {
    std::vector<double> m(order);
    for (std::size_t k = 1; k <= order; ++k) m[k - 1] = semicircle_expectation(g * Polynomial::monomial(k));
    return MomentSequence(std::move(m));
}

}  // namespace

TEST(Outlier, ClosedFormOracles) {
    EXPECT_EQ(f_outlier(2.0), 0.0);
    EXPECT_NEAR(f_outlier(3.0), 1.4292546660112708, 1e-14);
    EXPECT_NEAR(f_outlier(-3.0), 1.4292546660112708, 1e-14);
    EXPECT_NEAR(f_outlier(10.0), 44.40493151654121, 1e-12);
    EXPECT_THROW(f_outlier(1.9), InvalidParameter);
    EXPECT_THROW(f_outlier(NAN), InvalidParameter);
}

TEST(Outlier, ClosedFormMatchesQuadratureOn2To10) {
    for (double x = 2.0; x <= 10.0; x += 0.25) {
        const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [](double y) { return std::sqrt((y - 2.0) * (y + 2.0)); }, 2.0, x, 15, 1e-14);
        EXPECT_NEAR(f_outlier(x), q, 1e-10) << x;
    }
}

TEST(Outlier, NearEdgeIsSmallAndIncreasing) {
    // F(2 + h) ~ (4/3) h^{3/2}
    const double h = 1e-8;
    EXPECT_NEAR(f_outlier(2.0 + h), 4.0 / 3.0 * std::pow(h, 1.5), 1e-18);
    EXPECT_LT(f_outlier(2.5), f_outlier(2.6));
}

TEST(Ldp, SemicircleIsTheMinimizer) {
    const AcPlusAtoms sc(semicircle_density, {});
    const auto r = ldp_rate(sc);
    EXPECT_FALSE(r.is_infinite());
    EXPECT_LE(r.value(), 1e-8);
    EXPECT_GE(r.value(), 0.0);
}

TEST(Ldp, ArcsineRelativeEntropy) {
    const auto r = kl_semicircle(AcPlusAtoms(arcsine_density, {}));
    EXPECT_NEAR(r.value(), 1.0 - std::log(2.0), 1e-8);
}

TEST(Ldp, AtomAddsOutlierCost) {
    const AcPlusAtoms mu([](double x) { return 0.9 * semicircle_density(x); }, {{3.0, 0.1}});
    const auto r = ldp_rate(mu);
    EXPECT_NEAR(r.value(), 1.5346151816690971, 1e-8);
}

TEST(Ldp, AtomAtEdgeCostsNothing) {
    const AcPlusAtoms mu([](double x) { return 0.5 * semicircle_density(x); }, {{2.0, 0.5}});
    EXPECT_NEAR(ldp_rate(mu).value(), std::log(2.0), 1e-8);
}

TEST(Ldp, VanishingDensityIsInfinite) {
    // density supported on [0, 2] only
    const AcPlusAtoms mu([](double x) { return x > 0.0 ? 2.0 * semicircle_density(x) : 0.0; }, {});
    EXPECT_TRUE(ldp_rate(mu).is_infinite());
}

TEST(Ldp, InputValidation) {
    EXPECT_THROW(AcPlusAtoms(semicircle_density, {{1.0, 0.0}}), InvalidParameter);
    EXPECT_THROW(AcPlusAtoms([](double x) { return 0.5 * semicircle_density(x); }, {{3.0, -0.5}}),
                 InvalidParameter);
    EXPECT_THROW(AcPlusAtoms([](double x) { return 2.0 * semicircle_density(x); }, {}), InvalidInput);
    EXPECT_THROW(AcPlusAtoms([](double x) { return semicircle_density(x) - 0.1; }, {}), InvalidInput);
    EXPECT_THROW(AcPlusAtoms(nullptr, {}), InvalidParameter);
}

TEST(RateValue, Arithmetic) {
    EXPECT_TRUE((RateValue::finite(1.0) + RateValue::infinity()).is_infinite());
    EXPECT_EQ((RateValue::finite(1.0) + RateValue::finite(2.0)).value(), 3.0);
    EXPECT_THROW(RateValue::finite(-1.0), InvalidInput);
    EXPECT_THROW(RateValue::finite(INFINITY), InvalidInput);
}

TEST(Mdp, ZeroExactlyAtTheCentering) {
    for (double xi : {0.0, 0.5, 1.0, 3.0}) {
        for (auto v : {SignedVariant::Standard, SignedVariant::Shifted}) {
            const auto m = nu_moments(SignedMeasureSpec(xi, v), 15);
            EXPECT_EQ(mdp_rate_series(m, xi, v).value(), 0.0) << xi;
            EXPECT_EQ(mdp_rate_dinv_norm(m, xi, v), 0.0);
        }
    }
}

TEST(Mdp, SeriesEqualsInverseNormForm) {
    RngState rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> raw(15);
        for (double& x : raw) x = rng.normal() * 3.0;
        const MomentSequence m(raw);
        const double xi = 2.0 * rng.uniform();
        for (auto v : {SignedVariant::Standard, SignedVariant::Shifted}) {
            const double series = mdp_rate_series(m, xi, v).value();
            const double norm = mdp_rate_dinv_norm(m, xi, v);
            EXPECT_NEAR(series, norm, 1e-10 * std::max(1.0, series));
        }
    }
}

TEST(Mdp, SingleOrthonormalComponent) {
    // g = a p_k has rate a^2 / 2 against the zero measure
    for (std::size_t k = 1; k <= 8; ++k) {
        const Polynomial g = semicircle_orthonormal_poly(k) * Polynomial({0.7});
        const auto m = moments_of_density(g, 15);
        EXPECT_NEAR(mdp_rate_series(m, 0.0, SignedVariant::Standard).value(), 0.245, 1e-10) << k;
    }
}

TEST(Mdp, DensityFormMatchesSeriesForPolynomialDensities) {
    // polynomial densities of degree <= 8 with zero mass against mu_sc
    RngState rng(5);
    for (std::size_t degree = 1; degree <= 8; ++degree) {
        Polynomial g;
        for (std::size_t k = 1; k <= degree; ++k)
            g = g + semicircle_orthonormal_poly(k) * Polynomial({rng.normal()});
        const auto m = moments_of_density(g, 15);
        for (double xi : {0.0, 0.5, 2.0}) {
            const double series = mdp_rate_series(m, xi, SignedVariant::Shifted).value();
            const auto dens = mdp_rate_density([&](double x) { return g(x); }, xi, SignedVariant::Shifted);
            EXPECT_NEAR(dens.value(), series, 1e-8 * std::max(1.0, series)) << degree << " " << xi;
        }
        const double series0 = mdp_rate_series(m, 0.0, SignedVariant::Standard).value();
        const auto dens0 = mdp_rate_density([&](double x) { return g(x); }, 0.0, SignedVariant::Standard);
        EXPECT_NEAR(dens0.value(), series0, 1e-8 * std::max(1.0, series0));
    }
}

TEST(Mdp, DensityFormAtShiftedCenteringIsZero) {
    const auto r = mdp_rate_density([](double x) { return -1.5 * x; }, 1.5, SignedVariant::Shifted);
    EXPECT_NEAR(r.value(), 0.0, 1e-14);
}

TEST(Mdp, StandardDensityOfNuIsNotSquareIntegrable) {
    EXPECT_TRUE(mdp_rate_density([](double x) { return x; }, 1.0, SignedVariant::Standard).is_infinite());
}

TEST(Mdp, ArgumentChecks) {
    const MomentSequence m({0.0, 1.0, 0.0});
    EXPECT_THROW(mdp_rate_series(m, 1.0, SignedVariant::Standard, 4), InvalidParameter);
    EXPECT_THROW(mdp_rate_series(m, -1.0, SignedVariant::Standard, 3), InvalidParameter);
    EXPECT_THROW(mdp_rate_series(m, 1.0, SignedVariant::Standard, 0), InvalidParameter);
    EXPECT_NO_THROW(mdp_rate_series(m, 1.0, SignedVariant::Standard, 3));
}

TEST(RelativeDensity, Values) {
    EXPECT_DOUBLE_EQ(nu_relative_density(SignedMeasureSpec(1.0, SignedVariant::Standard), 1.0), -2.0 / 3.0);
    EXPECT_DOUBLE_EQ(nu_relative_density(SignedMeasureSpec(2.0, SignedVariant::Shifted), 0.5), -1.0);
    EXPECT_THROW(nu_relative_density(SignedMeasureSpec(1.0, SignedVariant::Standard), 2.0), DomainSingularity);
}

TEST(Outlier, EvenInX) {
    for (double x = 2.0; x <= 10.0; x += 0.37) EXPECT_EQ(f_outlier(-x), f_outlier(x));
}

TEST(Mdp, UnitFirstProjection) {
    // p_1 dmu_sc has moments m_k = m_{k+1}(mu_sc) = (1, 0, 2, 0, 5, ...); only
    // its first orthonormal projection is nonzero
    const MomentSequence sc = semicircle_moments(16);
    std::vector<double> shifted;
    for (std::size_t k = 1; k <= 15; ++k) shifted.push_back(sc[k + 1]);
    const MomentSequence m(shifted);
    EXPECT_EQ(m.truncated(5), MomentSequence({1.0, 0.0, 2.0, 0.0, 5.0}));
    EXPECT_NEAR(mdp_rate_series(m, 0.0, SignedVariant::Standard).value(), 0.5, 1e-12);
}

TEST(Mdp, FirstMomentOnly) {
    // m = (1, 0, 0, ...): int p_k dmu_m is the x-coefficient of p_k, which is
    // (-1)^{(k-1)/2} (k+1)/2 for odd k, so the rate is (1 + 4 + ... + 64)/2
    std::vector<double> m(15, 0.0);
    m[0] = 1.0;
    EXPECT_NEAR(mdp_rate_series(MomentSequence(m), 0.0, SignedVariant::Standard).value(), 102.0, 1e-10);
}

TEST(Mdp, DensityFormWorkedValues) {
    for (auto v : {SignedVariant::Standard, SignedVariant::Shifted}) {
        const SignedMeasureSpec spec(0.8, v);
        const auto exact = mdp_rate_density([&](double x) { return nu_relative_density(spec, x); }, 0.8, v);
        EXPECT_NEAR(exact.value(), 0.0, 1e-8);
    }
    const Polynomial p2 = semicircle_orthonormal_poly(2);
    EXPECT_NEAR(mdp_rate_density([&](double x) { return p2(x); }, 0.0, SignedVariant::Standard).value(), 0.5, 1e-12);
}
