#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "laguerre/errors.hpp"
#include "laguerre/moment_sequence.hpp"
#include "laguerre/numeric.hpp"
#include "laguerre/polynomial.hpp"
#include "laguerre/quadrature.hpp"

using namespace laguerre;

TEST(PairwiseSum, MatchesNaiveOnSmallInput) {
    std::vector<double> v{1.0, 2.0, 3.0, 4.5};
    EXPECT_EQ(pairwise_sum(v), 10.5);
    EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(PairwiseSum, LargeInputStaysAccurate) {
    std::vector<double> v(1 << 20, 0.1);
    EXPECT_NEAR(pairwise_sum(v), 0.1 * (1 << 20), 1e-6);
}

TEST(MomentSequence, OneBasedAccess) {
    MomentSequence m({0.0, 1.0, 0.0, 2.0});
    EXPECT_EQ(m.size(), 4u);
    EXPECT_EQ(m[2], 1.0);
    EXPECT_EQ(m.at(4), 2.0);
    EXPECT_THROW(m.at(0), InvalidParameter);
    EXPECT_THROW(m.at(5), InvalidParameter);
}

TEST(MomentSequence, RejectsNonFinite) {
    EXPECT_THROW(MomentSequence({1.0, NAN}), InvalidInput);
    EXPECT_THROW(MomentSequence({INFINITY}), InvalidInput);
}

TEST(MomentSequence, TruncateAndSubtract) {
    MomentSequence a({1.0, 2.0, 3.0}), b({0.5, 0.5, 0.5});
    EXPECT_EQ((a - b), MomentSequence({0.5, 1.5, 2.5}));
    EXPECT_EQ(a.truncated(2), MomentSequence({1.0, 2.0}));
    EXPECT_THROW(a - b.truncated(2), InvalidParameter);
}

TEST(Polynomial, TrimsAndEvaluates) {
    Polynomial p({1.0, -2.0, 0.0, 3.0, 0.0});
    EXPECT_EQ(p.degree(), 3u);
    EXPECT_EQ(p(2.0), 1.0 - 4.0 + 24.0);
    EXPECT_EQ(p.coefficient(7), 0.0);
    EXPECT_TRUE(Polynomial({0.0, 0.0}).is_zero());
}

TEST(Polynomial, Arithmetic) {
    const Polynomial x = Polynomial::monomial(1);
    const Polynomial p = (x + Polynomial({1.0})) * (x - Polynomial({1.0}));
    EXPECT_EQ(p, Polynomial({-1.0, 0.0, 1.0}));
    EXPECT_TRUE((p - p).is_zero());
}

TEST(Polynomial, TextForm) {
    EXPECT_EQ(to_string(Polynomial::monomial(3)), "x^3");
    EXPECT_EQ(to_string(Polynomial({1.0, 2.0, -0.5})), "1+2x-0.5x^2");
    EXPECT_EQ(to_string(Polynomial({0.0, -1.0})), "-x");
    EXPECT_EQ(to_string(Polynomial()), "0");
}

TEST(Quadrature, ChebyshevFirstKindIsExactForPolynomials) {
    // int_{-2}^{2} x^{2k} / sqrt(4 - x^2) dx = pi C(2k, k)
    const auto rule = gauss_chebyshev_first_kind(12);
    const double expected[] = {1, 2, 6, 20, 70, 252};
    for (int k = 0; k < 6; ++k) {
        const double q = rule.apply([k](double x) { return std::pow(x, 2 * k); });
        EXPECT_NEAR(q, pi * expected[k], 1e-11 * expected[k]);
    }
    for (double x : rule.nodes) EXPECT_LT(std::abs(x), 2.0);
}

TEST(Quadrature, SemicircleRuleReproducesCatalanMoments) {
    const auto rule = gauss_semicircle(10);
    const double catalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862};
    for (int k = 0; k < 10; ++k) {
        EXPECT_NEAR(rule.apply([k](double x) { return std::pow(x, 2 * k); }), catalan[k], 1e-11 * catalan[k]);
        EXPECT_NEAR(rule.apply([k](double x) { return std::pow(x, 2 * k + 1); }), 0.0, 1e-14 * std::ldexp(1.0, 2 * k + 1));
    }
}
