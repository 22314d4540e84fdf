#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"
#include "rng.hpp"
#include "spectral.hpp"

namespace laguerre {

/// Centering applied to the raw Laguerre matrix L_n(beta, gamma).
enum class RescalingMode {
    Standard,  ///< (L - 2 gamma I) / sqrt(2 gamma n beta)
    Shifted,   ///< (L - (2 gamma + n beta) I) / sqrt(2 gamma n beta)
    None,      ///< raw coefficients
};

inline std::string_view to_string(RescalingMode mode) {
    switch (mode) {
        case RescalingMode::Standard: return "standard";
        case RescalingMode::Shifted: return "shifted";
        case RescalingMode::None: return "none";
    }
    return "unknown";
}

/// Parameters of the Laguerre beta-ensemble of size n.
///
/// The eigenvalue density is proportional to
///     prod_{i<j} |l_i - l_j|^beta  prod_i l_i^{gamma - (n-1) beta/2 - 1} e^{-l_i/2},
/// which needs beta > 0 and gamma > (n-1) beta/2.
class EnsembleParams {
public:
    EnsembleParams(std::size_t n, double beta, double gamma, RescalingMode mode = RescalingMode::Standard)
        : n_(n), beta_(beta), gamma_(gamma), mode_(mode) {
        if (n_ == 0) throw InvalidParameter("matrix size n must be at least 1");
        if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw InvalidParameter("beta must be positive and finite");
        const double bound = static_cast<double>(n_ - 1) * beta_ / 2.0;
        if (!(gamma_ > bound) || !std::isfinite(gamma_))
            throw InvalidParameter("gamma = " + std::to_string(gamma_) + " must exceed (n-1) beta/2 = " +
                                   std::to_string(bound));
    }

    std::size_t n() const noexcept { return n_; }
    double beta() const noexcept { return beta_; }
    double beta_prime() const noexcept { return beta_ / 2.0; }
    double gamma() const noexcept { return gamma_; }
    RescalingMode mode() const noexcept { return mode_; }

    /// sqrt(2 gamma n beta), the common divisor of both centerings.
    double scale() const noexcept { return std::sqrt(2.0 * gamma_ * static_cast<double>(n_) * beta_); }

private:
    std::size_t n_;
    double beta_;
    double gamma_;
    RescalingMode mode_;
};

/// Gamma(shape, 1) by Marsaglia-Tsang squeeze/rejection. Shapes below one
/// are boosted: G(a) = G(a + 1) U^{1/a}.
inline double sample_gamma(RngState& rng, double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) throw InvalidParameter("gamma shape must be positive and finite");
    if (shape < 1.0) {
        for (;;) {
            const double g = sample_gamma(rng, shape + 1.0) * std::pow(rng.uniform(), 1.0 / shape);
            if (g > 0.0) return g;  // redraw on underflow
        }
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

/// One chi-squared draw with r > 0 (not necessarily integer) degrees of freedom.
inline double sample_chi_squared(RngState& rng, double dof) {
    if (!(dof > 0.0) || !std::isfinite(dof))
        throw InvalidParameter("chi-squared degrees of freedom must be positive, got " + std::to_string(dof));
    return 2.0 * sample_gamma(rng, dof / 2.0);
}

/// Symmetric Dirichlet(beta', ..., beta') on the n-simplex, as normalized
/// independent Gamma(beta', 1) draws.
inline std::vector<double> sample_dirichlet(RngState& rng, std::size_t n, double beta_prime) {
    if (n == 0) throw InvalidParameter("Dirichlet dimension must be at least 1");
    if (!(beta_prime > 0.0) || !std::isfinite(beta_prime))
        throw InvalidParameter("Dirichlet parameter must be positive and finite");
    std::vector<double> w(n);
    for (double& x : w) x = sample_gamma(rng, beta_prime);
    const double total = pairwise_sum(w);
    for (double& x : w) x /= total;
    return w;
}

/// Raw coefficients of the tridiagonal model L_n(beta, gamma).
///
/// With independent z_1..z_{2n-1},
///     z_k ~ chi^2_{2 gamma - beta'(k-1)}  (k odd),   z_k ~ chi^2_{beta'(2n-k)}  (k even),
/// the entries are d_k = z_{2k-1} + z_{2k-2} (z_0 = 0) and c_k = sqrt(z_{2k-1} z_{2k}).
inline JacobiCoefficients sample_laguerre_tridiagonal(RngState& rng, const EnsembleParams& params) {
    const std::size_t n = params.n();
    const double bp = params.beta_prime();
    const double gamma = params.gamma();
    std::vector<double> z(2 * n, 0.0);  // z[0] = 0
    for (std::size_t k = 1; k <= 2 * n - 1; ++k) {
        const double kd = static_cast<double>(k);
        const double dof = (k % 2 == 1) ? 2.0 * gamma - bp * (kd - 1.0) : bp * (2.0 * static_cast<double>(n) - kd);
        z[k] = sample_chi_squared(rng, dof);
    }
    std::vector<double> diag(n), offdiag(n - 1);
    for (std::size_t k = 1; k <= n; ++k) diag[k - 1] = z[2 * k - 1] + z[2 * k - 2];
    for (std::size_t k = 1; k < n; ++k) offdiag[k - 1] = std::sqrt(z[2 * k - 1] * z[2 * k]);
    return JacobiCoefficients(std::move(diag), std::move(offdiag));
}

/// Applies the centering and scaling selected by params.mode() entrywise.
inline JacobiCoefficients rescale(const JacobiCoefficients& coeffs, const EnsembleParams& params) {
    if (coeffs.size() != params.n())
        throw InvalidParameter("rescale: coefficients have size " + std::to_string(coeffs.size()) +
                               " but params.n() = " + std::to_string(params.n()));
    if (params.mode() == RescalingMode::None) return coeffs;
    const double s = params.scale();
    double shift = 2.0 * params.gamma();
    if (params.mode() == RescalingMode::Shifted) shift += static_cast<double>(params.n()) * params.beta();
    std::vector<double> diag(coeffs.diag());
    std::vector<double> offdiag(coeffs.offdiag());
    for (double& d : diag) d = (d - shift) / s;
    for (double& c : offdiag) c /= s;
    return JacobiCoefficients(std::move(diag), std::move(offdiag));
}

/// Draws the (rescaled) Jacobi matrix of the ensemble.
inline JacobiCoefficients sample_rescaled_jacobi(RngState& rng, const EnsembleParams& params) {
    return rescale(sample_laguerre_tridiagonal(rng, params), params);
}

/// Weighted spectral measure of the rescaled Laguerre matrix.
inline SpectralMeasure sample_spectral_measure(RngState& rng, const EnsembleParams& params) {
    return eigen_spectral(sample_rescaled_jacobi(rng, params));
}

}  // namespace laguerre
