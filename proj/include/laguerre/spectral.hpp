#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "moment_sequence.hpp"
#include "numeric.hpp"

namespace laguerre {

/// Entries of a finite symmetric tridiagonal (Jacobi) matrix.
///
///     | d_1  c_1                 |
///     | c_1  d_2  c_2            |
///     |      c_2   .    .        |
///     |            .    .  c_n-1 |
///     |               c_n-1  d_n |
///
/// Off-diagonal entries are strictly positive.
class JacobiCoefficients {
public:
    JacobiCoefficients(std::vector<double> diag, std::vector<double> offdiag)
        : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
        if (diag_.empty()) throw InvalidParameter("Jacobi matrix needs at least one diagonal entry");
        if (offdiag_.size() + 1 != diag_.size())
            throw InvalidParameter("Jacobi matrix: off-diagonal length must be diagonal length - 1");
        for (double d : diag_) {
            if (!std::isfinite(d)) throw InvalidInput("Jacobi matrix: non-finite diagonal entry");
        }
        for (double c : offdiag_) {
            if (!(c > 0.0) || !std::isfinite(c))
                throw InvalidInput("Jacobi matrix: off-diagonal entries must be positive and finite");
        }
    }

    std::size_t size() const noexcept { return diag_.size(); }
    const std::vector<double>& diag() const noexcept { return diag_; }
    const std::vector<double>& offdiag() const noexcept { return offdiag_; }

    friend bool operator==(const JacobiCoefficients&, const JacobiCoefficients&) = default;

private:
    std::vector<double> diag_;
    std::vector<double> offdiag_;
};

/// Finitely supported probability measure sum_i w_i delta_{lambda_i}.
///
/// Atoms are sorted ascending. Eigenvalues of a Jacobi matrix are simple in
/// exact arithmetic, but two of them can round to the same double, so only
/// a nondecreasing order is enforced. Weights may underflow to zero for
/// eigenvectors whose first component is below ~1e-154.
class SpectralMeasure {
public:
    static constexpr double mass_tolerance = 1e-10;

    SpectralMeasure(std::vector<double> atoms, std::vector<double> weights)
        : atoms_(std::move(atoms)), weights_(std::move(weights)) {
        if (atoms_.empty()) throw InvalidParameter("spectral measure needs at least one atom");
        if (atoms_.size() != weights_.size())
            throw InvalidParameter("spectral measure: atoms and weights differ in length");
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (!std::isfinite(atoms_[i]) || !std::isfinite(weights_[i]))
                throw InvalidInput("spectral measure: non-finite atom or weight");
            if (weights_[i] < 0.0) throw InvalidInput("spectral measure: negative weight");
            if (i > 0 && atoms_[i] < atoms_[i - 1])
                throw InvalidInput("spectral measure: atoms must be sorted ascending");
        }
        const double mass = pairwise_sum(weights_);
        if (std::abs(mass - 1.0) > mass_tolerance)
            throw InvalidInput("spectral measure: weights sum to " + std::to_string(mass) + ", not 1");
    }

    std::size_t size() const noexcept { return atoms_.size(); }
    const std::vector<double>& atoms() const noexcept { return atoms_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

private:
    std::vector<double> atoms_;
    std::vector<double> weights_;
};

/// Sweeps allowed per eigenvalue before eigen_spectral gives up.
inline constexpr int ql_iteration_cap = 50;

/// Spectral measure of the pair (J, e_1).
///
/// Implicit QL with Wilkinson-type shifts on the tridiagonal matrix. Only the
/// first row of the accumulated rotation product is carried along, which is
/// all the weights w_i = <u_i, e_1>^2 need (the Golub-Welsch trick), so the
/// cost is O(n^2) time and O(n) memory. The sweeps run in long double; the
/// results are rounded to double once at the end.
inline SpectralMeasure eigen_spectral(const JacobiCoefficients& jacobi) {
    using real = long double;
    const std::size_t n = jacobi.size();
    std::vector<real> d(jacobi.diag().begin(), jacobi.diag().end());
    std::vector<real> e(n, 0.0L);
    std::copy(jacobi.offdiag().begin(), jacobi.offdiag().end(), e.begin());
    // first components of the eigenvectors
    std::vector<real> z(n, 0.0L);
    z[0] = 1.0L;

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const real dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<real>::epsilon() * dd) break;
            }
            if (m == l) break;
            if (iter++ == ql_iteration_cap) {
                throw NumericalFailure("eigen_spectral: QL iteration did not converge for a " +
                                       std::to_string(n) + "x" + std::to_string(n) + " Jacobi matrix");
            }
            real g = (d[l + 1] - d[l]) / (2.0L * e[l]);
            real r = std::hypot(g, 1.0L);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            real s = 1.0L, c = 1.0L, p = 0.0L;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                real f = s * e[i];
                const real b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0L) {
                    d[i + 1] -= p;
                    e[m] = 0.0L;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0L * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0L;
        } while (m != l);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    std::vector<double> atoms(n), weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        atoms[i] = static_cast<double>(d[order[i]]);
        weights[i] = static_cast<double>(z[order[i]] * z[order[i]]);
    }
    return SpectralMeasure(std::move(atoms), std::move(weights));
}

/// m_k = <e_1, J^k e_1> for k = 1..K by repeated tridiagonal products.
///
/// J^k e_1 is supported on the first k+1 coordinates, so only the leading
/// (K+1)x(K+1) block is touched and the cost is O(K^2) regardless of n.
/// Accumulates in long double.
inline MomentSequence moments_via_operator(const JacobiCoefficients& jacobi, std::size_t order) {
    if (order == 0) throw InvalidParameter("moment order must be at least 1");
    const std::size_t n = jacobi.size();
    const auto& d = jacobi.diag();
    const auto& c = jacobi.offdiag();
    const std::size_t width = std::min(n, order + 1);
    std::vector<long double> v(width, 0.0L), next(width, 0.0L);
    v[0] = 1.0L;
    std::vector<double> out(order);
    for (std::size_t k = 1; k <= order; ++k) {
        const std::size_t support = std::min(width, k + 1);
        for (std::size_t i = 0; i < support; ++i) {
            long double acc = static_cast<long double>(d[i]) * v[i];
            if (i > 0) acc += static_cast<long double>(c[i - 1]) * v[i - 1];
            if (i + 1 < n && i + 1 < width) acc += static_cast<long double>(c[i]) * v[i + 1];
            next[i] = acc;
        }
        std::swap(v, next);
        out[k - 1] = static_cast<double>(v[0]);
    }
    return MomentSequence(std::move(out));
}

/// m_k = sum_i w_i lambda_i^k, k = 1..K, each summed pairwise. The powers are
/// built up in long double.
inline MomentSequence moments_of_measure(const SpectralMeasure& mu, std::size_t order) {
    if (order == 0) throw InvalidParameter("moment order must be at least 1");
    const auto& atoms = mu.atoms();
    std::vector<long double> powers(mu.weights().begin(), mu.weights().end());
    std::vector<double> terms(powers.size());
    std::vector<double> out(order);
    for (std::size_t k = 1; k <= order; ++k) {
        for (std::size_t i = 0; i < powers.size(); ++i) {
            powers[i] *= atoms[i];
            terms[i] = static_cast<double>(powers[i]);
        }
        out[k - 1] = pairwise_sum(terms);
    }
    return MomentSequence(std::move(out));
}

/// First `order` recursion coefficients of the orthonormal polynomials of mu
/// (the inverse Szego map, truncated).
///
/// Stieltjes procedure on the atoms, i.e. Lanczos on diag(lambda) started
/// from sqrt(w), with two passes of full Gram-Schmidt against every earlier
/// polynomial. A vanishing c_k is reported, never patched.
inline JacobiCoefficients measure_to_coefficients(const SpectralMeasure& mu, std::size_t order) {
    const std::size_t n = mu.size();
    if (order == 0) throw InvalidParameter("measure_to_coefficients: order must be at least 1");
    if (order > n)
        throw InvalidParameter("measure_to_coefficients: order " + std::to_string(order) +
                               " exceeds the number of atoms " + std::to_string(n));
    const auto& x = mu.atoms();
    double scale = 0.0;
    for (double a : x) scale = std::max(scale, std::abs(a));
    scale = std::max(scale, 1.0);

    // basis[k][i] = sqrt(w_i) p_k(lambda_i); orthonormal in the Euclidean product
    std::vector<std::vector<double>> basis;
    basis.reserve(order);
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = std::sqrt(mu.weights()[i]);
    basis.push_back(q);

    auto dot = [n](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> prod(n);
        for (std::size_t i = 0; i < n; ++i) prod[i] = a[i] * b[i];
        return pairwise_sum(prod);
    };

    std::vector<double> diag, offdiag;
    for (std::size_t k = 0; k < order; ++k) {
        const auto& pk = basis[k];
        for (std::size_t i = 0; i < n; ++i) q[i] = x[i] * pk[i];
        diag.push_back(dot(q, pk));
        if (k + 1 == order) break;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& pj : basis) {
                const double proj = dot(q, pj);
                for (std::size_t i = 0; i < n; ++i) q[i] -= proj * pj[i];
            }
        }
        const double norm = std::sqrt(dot(q, q));
        if (!(norm > 64.0 * std::numeric_limits<double>::epsilon() * scale)) {
            throw NumericalFailure("measure_to_coefficients: breakdown at c_" + std::to_string(k + 1) +
                                   " (norm " + std::to_string(norm) + ")");
        }
        offdiag.push_back(norm);
        for (double& v : q) v /= norm;
        basis.push_back(q);
    }
    return JacobiCoefficients(std::move(diag), std::move(offdiag));
}

/// Truncated free Jacobi matrix: zero diagonal, unit off-diagonal.
inline JacobiCoefficients free_jacobi(std::size_t n) {
    if (n == 0) throw InvalidParameter("free_jacobi: n must be at least 1");
    return JacobiCoefficients(std::vector<double>(n, 0.0), std::vector<double>(n - 1, 1.0));
}

}  // namespace laguerre
