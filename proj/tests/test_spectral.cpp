#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "laguerre/ensembles.hpp"
#include "laguerre/moments.hpp"
#include "laguerre/spectral.hpp"

using namespace laguerre;

namespace {

JacobiCoefficients random_jacobi(std::uint64_t seed, std::size_t n) {
    RngState rng(seed);
    std::vector<double> d(n), c(n - 1);
    for (double& x : d) x = rng.normal();
    for (double& x : c) x = 0.1 + rng.uniform();
    return JacobiCoefficients(d, c);
}

double max_abs_diff(const MomentSequence& a, const MomentSequence& b) {
    double m = 0.0;
    for (std::size_t k = 1; k <= a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace

TEST(JacobiCoefficients, Validation) {
    EXPECT_THROW(JacobiCoefficients({}, {}), InvalidParameter);
    EXPECT_THROW(JacobiCoefficients({1.0, 2.0}, {}), InvalidParameter);
    EXPECT_THROW(JacobiCoefficients({1.0, 2.0}, {0.0}), InvalidInput);
    EXPECT_THROW(JacobiCoefficients({1.0, 2.0}, {-1.0}), InvalidInput);
    EXPECT_THROW(JacobiCoefficients({NAN, 2.0}, {1.0}), InvalidInput);
    EXPECT_NO_THROW(JacobiCoefficients({1.0}, {}));
}

TEST(SpectralMeasure, Validation) {
    EXPECT_THROW(SpectralMeasure({}, {}), InvalidParameter);
    EXPECT_THROW(SpectralMeasure({0.0, 1.0}, {1.0}), InvalidParameter);
    EXPECT_THROW(SpectralMeasure({0.0, 1.0}, {0.5, 0.6}), InvalidInput);
    EXPECT_THROW(SpectralMeasure({1.0, 0.0}, {0.5, 0.5}), InvalidInput);
    EXPECT_THROW(SpectralMeasure({0.0, 1.0}, {1.5, -0.5}), InvalidInput);
    EXPECT_NO_THROW(SpectralMeasure({0.0, 1.0}, {0.25, 0.75}));
}

TEST(EigenSpectral, OneByOne) {
    const auto mu = eigen_spectral(JacobiCoefficients({3.5}, {}));
    EXPECT_EQ(mu.atoms()[0], 3.5);
    EXPECT_EQ(mu.weights()[0], 1.0);
}

TEST(EigenSpectral, TwoByTwoClosedForm) {
    // [[0, 1], [1, 0]]: eigenvalues -1, 1 with weights 1/2 each
    const auto mu = eigen_spectral(JacobiCoefficients({0.0, 0.0}, {1.0}));
    EXPECT_NEAR(mu.atoms()[0], -1.0, 1e-15);
    EXPECT_NEAR(mu.atoms()[1], 1.0, 1e-15);
    EXPECT_NEAR(mu.weights()[0], 0.5, 1e-15);
    EXPECT_NEAR(mu.weights()[1], 0.5, 1e-15);
}

TEST(EigenSpectral, MatchesEigenSelfAdjointSolver) {
    for (std::size_t n : {3u, 17u, 60u, 200u}) {
        const auto j = random_jacobi(n, n);
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) a(i, i) = j.diag()[i];
        for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = j.offdiag()[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
        const auto mu = eigen_spectral(j);
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(mu.atoms()[i], solver.eigenvalues()(i), 1e-12);
            const double u = solver.eigenvectors()(0, i);
            EXPECT_NEAR(mu.weights()[i], u * u, 1e-12);
        }
    }
}

TEST(EigenSpectral, WeightsSumToOneAndAtomsSorted) {
    RngState rng(6);
    const auto mu = sample_spectral_measure(rng, EnsembleParams(300, 1.0, 300.0 * 300.0));
    double total = 0.0;
    for (double w : mu.weights()) total += w;
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_TRUE(std::is_sorted(mu.atoms().begin(), mu.atoms().end()));
}

TEST(EigenSpectral, FreeJacobiAtomsAreChebyshevNodes) {
    // eigenvalues of the n x n free Jacobi matrix are 2 cos(j pi / (n + 1))
    const std::size_t n = 25;
    const auto mu = eigen_spectral(free_jacobi(n));
    for (std::size_t j = 1; j <= n; ++j)
        EXPECT_NEAR(mu.atoms()[n - j], 2.0 * std::cos(static_cast<double>(j) * pi / (n + 1.0)), 1e-13);
}

TEST(Moments, FreeJacobiGivesCatalanUpToOrder2nMinus1) {
    const std::size_t n = 10;
    const auto m = moments_via_operator(free_jacobi(n), 2 * n - 1);
    const auto sc = semicircle_moments(2 * n - 1);
    EXPECT_EQ(m, sc);
    // order 2n sees the truncation
    EXPECT_NE(moments_via_operator(free_jacobi(n), 2 * n)[2 * n], semicircle_moments(2 * n)[2 * n]);
}

TEST(Moments, OperatorAndMeasureRoutesAgree) {
    RngState rng(2);
    const auto j = sample_rescaled_jacobi(rng, EnsembleParams(100, 2.0, 1e6));
    const auto a = moments_via_operator(j, 20);
    const auto b = moments_of_measure(eigen_spectral(j), 20);
    EXPECT_LE(max_abs_diff(a, b), 1e-10);
}

TEST(Moments, OperatorOrderBeyondSize) {
    const JacobiCoefficients j({1.0, -1.0}, {2.0});
    const auto a = moments_via_operator(j, 9);
    const auto b = moments_of_measure(eigen_spectral(j), 9);
    EXPECT_LE(max_abs_diff(a, b), 1e-9);
    EXPECT_THROW(moments_via_operator(j, 0), InvalidParameter);
}

TEST(Szego, RoundTripAtN30) {
    RngState rng(30);
    const auto j = sample_rescaled_jacobi(rng, EnsembleParams(30, 2.0, 27000.0));
    const auto back = measure_to_coefficients(eigen_spectral(j), 30);
    for (std::size_t i = 0; i < 30; ++i) EXPECT_NEAR(back.diag()[i], j.diag()[i], 1e-8);
    for (std::size_t i = 0; i < 29; ++i) EXPECT_NEAR(back.offdiag()[i], j.offdiag()[i], 1e-8);
}

TEST(Szego, TruncatedOrderGivesLeadingBlock) {
    const auto j = random_jacobi(4, 40);
    const auto back = measure_to_coefficients(eigen_spectral(j), 10);
    EXPECT_EQ(back.size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(back.diag()[i], j.diag()[i], 1e-10);
}

TEST(Szego, Errors) {
    const SpectralMeasure mu({-1.0, 1.0}, {0.5, 0.5});
    EXPECT_THROW(measure_to_coefficients(mu, 3), InvalidParameter);
    EXPECT_THROW(measure_to_coefficients(mu, 0), InvalidParameter);
    // nearly coincident atoms: breakdown is reported
    const SpectralMeasure degenerate({0.5, 0.5 + 1e-15}, {0.5, 0.5});
    EXPECT_THROW(measure_to_coefficients(degenerate, 2), NumericalFailure);
}

TEST(FreeJacobi, Shape) {
    const auto j = free_jacobi(4);
    EXPECT_EQ(j.diag(), std::vector<double>(4, 0.0));
    EXPECT_EQ(j.offdiag(), std::vector<double>(3, 1.0));
    EXPECT_THROW(free_jacobi(0), InvalidParameter);
}

TEST(EigenSpectral, FreeJacobiThreeByThree) {
    const auto mu = eigen_spectral(free_jacobi(3));
    const double atoms[] = {-std::sqrt(2.0), 0.0, std::sqrt(2.0)};
    const double weights[] = {0.25, 0.5, 0.25};
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(mu.atoms()[i], atoms[i], 1e-15);
        EXPECT_NEAR(mu.weights()[i], weights[i], 1e-15);
    }
}

TEST(EigenSpectral, FreeJacobiWeightsAtN10) {
    const std::size_t n = 10;
    const auto mu = eigen_spectral(free_jacobi(n));
    for (std::size_t j = 1; j <= n; ++j) {
        const double t = static_cast<double>(j) * pi / (n + 1.0);
        EXPECT_NEAR(mu.atoms()[n - j], 2.0 * std::cos(t), 1e-10);
        EXPECT_NEAR(mu.weights()[n - j], 2.0 / (n + 1.0) * std::sin(t) * std::sin(t), 1e-10);
    }
}

TEST(Moments, SimpleMeasures) {
    EXPECT_EQ(moments_of_measure(SpectralMeasure({2.0}, {1.0}), 3), MomentSequence({2.0, 4.0, 8.0}));
    EXPECT_EQ(moments_of_measure(SpectralMeasure({-1.0, 1.0}, {0.5, 0.5}), 4), MomentSequence({0.0, 1.0, 0.0, 1.0}));
    EXPECT_EQ(moments_via_operator(JacobiCoefficients({-1.5}, {}), 3), MomentSequence({-1.5, 2.25, -3.375}));
}

TEST(Moments, FreeJacobiLowOrders) {
    const auto m = moments_via_operator(free_jacobi(4), 6);
    EXPECT_EQ(m, MomentSequence({0.0, 1.0, 0.0, 2.0, 0.0, 5.0}));
    const auto big = moments_via_operator(free_jacobi(40), 10);
    const auto sc = semicircle_moments(10);
    for (std::size_t k = 1; k <= 10; ++k) EXPECT_NEAR(big[k], sc[k], 1e-12);
}

TEST(Moments, RandomJacobiRoutesAgreeAtN50) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        RngState rng(seed);
        std::vector<double> d(50), c(49);
        for (double& x : d) x = 2.0 * rng.uniform() - 1.0;
        for (double& x : c) x = 0.5 * rng.uniform();
        const JacobiCoefficients j(d, c);
        EXPECT_LE(max_abs_diff(moments_via_operator(j, 20), moments_of_measure(eigen_spectral(j), 20)), 1e-10);
    }
}

TEST(Szego, RoundTripUniformRandomInput) {
    RngState rng(165);
    std::vector<double> d(30), c(29);
    for (double& x : d) x = 2.0 * rng.uniform() - 1.0;
    for (double& x : c) x = 0.5 + rng.uniform();
    const JacobiCoefficients j(d, c);
    const auto back = measure_to_coefficients(eigen_spectral(j), 30);
    for (std::size_t i = 0; i < 30; ++i) EXPECT_NEAR(back.diag()[i], d[i], 1e-8);
    for (std::size_t i = 0; i < 29; ++i) EXPECT_NEAR(back.offdiag()[i], c[i], 1e-8);
}

TEST(Szego, SmallMeasures) {
    const auto two = measure_to_coefficients(SpectralMeasure({-1.0, 1.0}, {0.5, 0.5}), 2);
    EXPECT_NEAR(two.diag()[0], 0.0, 1e-15);
    EXPECT_NEAR(two.diag()[1], 0.0, 1e-15);
    EXPECT_NEAR(two.offdiag()[0], 1.0, 1e-15);
    const auto one = measure_to_coefficients(SpectralMeasure({0.75}, {1.0}), 1);
    EXPECT_EQ(one.diag()[0], 0.75);
}

TEST(FreeJacobi, Sizes) {
    EXPECT_EQ(free_jacobi(1).diag(), std::vector<double>{0.0});
    EXPECT_TRUE(free_jacobi(1).offdiag().empty());
}
