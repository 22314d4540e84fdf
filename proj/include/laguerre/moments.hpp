#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "moment_sequence.hpp"
#include "numeric.hpp"
#include "polynomial.hpp"

namespace laguerre {

/// Largest order for which the exact integer tables below are guaranteed.
inline constexpr std::size_t exact_order_cap = 40;

/// C(n, k) in 64-bit integers, multiplicative formula with overflow checks.
/// C(n, k) = 0 for k < 0 or k > n.
inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
    if (n < 0) throw InvalidParameter("binomial: negative n");
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t result = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        std::int64_t product;
        if (__builtin_mul_overflow(result, n - k + i, &product))
            throw OverflowGuard("binomial(" + std::to_string(n) + ", " + std::to_string(k) + ") overflows 64 bits");
        result = product / i;
    }
    return result;
}

inline std::int64_t catalan(std::int64_t k) { return binomial(2 * k, k) / (k + 1); }

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowGuard("integer product overflows 64 bits");
    return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowGuard("integer sum overflows 64 bits");
    return r;
}

// ---------------------------------------------------------------------------
// Reference measures

/// Exact integer moment m_k of the semicircle law on [-2, 2].
inline std::int64_t semicircle_moment_exact(std::size_t k) {
    if (k % 2 == 1) return 0;
    return catalan(static_cast<std::int64_t>(k / 2));
}

/// Moments of the semicircle law: odd moments vanish, m_2k = Catalan(k).
inline MomentSequence semicircle_moments(std::size_t order) {
    if (order == 0) throw InvalidParameter("moment order must be at least 1");
    if (order > exact_order_cap) throw OverflowGuard("semicircle moments are exact only up to order 40");
    std::vector<double> m(order);
    for (std::size_t k = 1; k <= order; ++k) m[k - 1] = static_cast<double>(semicircle_moment_exact(k));
    return MomentSequence(std::move(m));
}

/// Moments of the arcsine law on [-2, 2]: odd moments vanish, m_2k = C(2k, k).
inline MomentSequence arcsine_moments(std::size_t order) {
    if (order == 0) throw InvalidParameter("moment order must be at least 1");
    std::vector<double> m(order, 0.0);
    for (std::size_t k = 2; k <= order; k += 2) {
        m[k - 1] = static_cast<double>(binomial(static_cast<std::int64_t>(k), static_cast<std::int64_t>(k / 2)));
    }
    return MomentSequence(std::move(m));
}

/// Density of the Marchenko-Pastur law MP(tau), 0 < tau <= 1.
inline double mp_density(double tau, double x) {
    const double lo = (1.0 - std::sqrt(tau)) * (1.0 - std::sqrt(tau));
    const double hi = (1.0 + std::sqrt(tau)) * (1.0 + std::sqrt(tau));
    if (!(x > lo && x < hi)) return 0.0;
    return std::sqrt((hi - x) * (x - lo)) / (2.0 * pi * tau * x);
}

namespace detail {
inline void check_tau(double tau) {
    if (!(tau > 0.0 && tau <= 1.0)) throw InvalidParameter("Marchenko-Pastur parameter tau must lie in (0, 1]");
}

/// int x^k dMP(tau) by tanh-sinh quadrature, which absorbs the square-root
/// edges and the 1/x singularity at tau = 1.
inline double mp_moment(double tau, std::size_t k) {
    const double lo = (1.0 - std::sqrt(tau)) * (1.0 - std::sqrt(tau));
    const double hi = (1.0 + std::sqrt(tau)) * (1.0 + std::sqrt(tau));
    boost::math::quadrature::tanh_sinh<double> integrator;
    auto integrand = [tau, k, lo, hi](double x) {
        if (!(x > lo && x < hi)) return 0.0;
        return std::pow(x, static_cast<double>(k)) * std::sqrt((hi - x) * (x - lo)) / (2.0 * pi * tau * x);
    };
    return integrator.integrate(integrand, lo, hi, 1e-14);
}
}  // namespace detail

/// Total mass of MP(tau) by the same quadrature used for mp_moments.
inline double mp_total_mass(double tau) {
    detail::check_tau(tau);
    return detail::mp_moment(tau, 0);
}

/// Moments of MP(tau) by adaptive quadrature of its density.
inline MomentSequence mp_moments(std::size_t order, double tau) {
    detail::check_tau(tau);
    if (order == 0) throw InvalidParameter("moment order must be at least 1");
    std::vector<double> m(order);
    for (std::size_t k = 1; k <= order; ++k) m[k - 1] = detail::mp_moment(tau, k);
    return MomentSequence(std::move(m));
}

// ---------------------------------------------------------------------------
// Corrective signed measures

enum class SignedVariant {
    Standard,  ///< nu_xi, density (xi/2pi) x(x^2-3)/sqrt(4-x^2)
    Shifted,   ///< nu-hat_xi, density -(xi/2pi) x sqrt(4-x^2)
};

struct SignedMeasureSpec {
    double xi = 0.0;
    SignedVariant variant = SignedVariant::Standard;

    SignedMeasureSpec() = default;
    SignedMeasureSpec(double xi_, SignedVariant variant_) : xi(xi_), variant(variant_) {
        if (!(xi >= 0.0) || !std::isfinite(xi)) throw InvalidParameter("xi must be finite and nonnegative");
    }
};

/// Integer part of m_k(nu) per unit xi.
inline std::int64_t nu_moment_unit(SignedVariant variant, std::size_t k) {
    if (k % 2 == 0) return 0;
    const auto kk = static_cast<std::int64_t>(k);
    // C(1, -1) = 0
    const std::int64_t lower = (k >= 3) ? binomial(kk, (kk - 3) / 2) : 0;
    if (variant == SignedVariant::Standard) return lower;
    return lower - binomial(kk, (kk - 1) / 2);
}

/// Moments of nu_xi (Standard) or nu-hat_xi (Shifted).
///
/// Standard: xi C(k, (k-3)/2) for odd k >= 3, zero otherwise.
/// Shifted:  xi [C(k, (k-3)/2) - C(k, (k-1)/2)] for odd k, zero for even k.
///           At k = 1 this is -xi, the first moment of the density.
inline MomentSequence nu_moments(const SignedMeasureSpec& spec, std::size_t order) {
    if (order == 0) throw InvalidParameter("moment order must be at least 1");
    std::vector<double> m(order);
    for (std::size_t k = 1; k <= order; ++k) {
        m[k - 1] = spec.xi * static_cast<double>(nu_moment_unit(spec.variant, k));
    }
    return MomentSequence(std::move(m));
}

/// Signed Lebesgue density of nu_xi or nu-hat_xi; zero outside [-2, 2].
/// The Standard density blows up at +-2, where evaluation is refused.
inline double nu_density(const SignedMeasureSpec& spec, double x) {
    const double ax = std::abs(x);
    if (spec.variant == SignedVariant::Standard) {
        if (ax == 2.0) throw DomainSingularity("nu_xi density is singular at x = +-2");
        if (ax > 2.0) return 0.0;
        return spec.xi / (2.0 * pi) * x * (x * x - 3.0) / std::sqrt(4.0 - x * x);
    }
    if (ax > 2.0) return 0.0;
    return -spec.xi / (2.0 * pi) * x * std::sqrt(4.0 - x * x);
}

// ---------------------------------------------------------------------------
// The D matrix

/// Lower-triangular integer matrix
///     D_{i,j} = C(i, (i-j)/2) - C(i, (i-j)/2 - 1)   for i >= j, i + j even,
/// zero otherwise. Rows and columns are one-based.
class DMatrix {
public:
    explicit DMatrix(std::size_t order) : order_(order), entries_(order * order, 0) {}

    std::size_t order() const noexcept { return order_; }

    std::int64_t operator()(std::size_t i, std::size_t j) const { return entries_[(i - 1) * order_ + (j - 1)]; }
    std::int64_t& operator()(std::size_t i, std::size_t j) { return entries_[(i - 1) * order_ + (j - 1)]; }

    friend bool operator==(const DMatrix&, const DMatrix&) = default;

private:
    std::size_t order_;
    std::vector<std::int64_t> entries_;
};

inline std::int64_t d_entry(std::size_t i, std::size_t j) {
    if (j > i || (i + j) % 2 == 1) return 0;
    const auto ii = static_cast<std::int64_t>(i);
    const auto h = static_cast<std::int64_t>((i - j) / 2);
    return binomial(ii, h) - binomial(ii, h - 1);
}

inline void check_d_order(std::size_t order) {
    if (order == 0) throw InvalidParameter("D matrix order must be at least 1");
    if (order > exact_order_cap)
        throw OverflowGuard("D matrix order " + std::to_string(order) + " exceeds the exact cap of 40");
}

/// Truncation D_K.
inline DMatrix d_matrix(std::size_t order) {
    check_d_order(order);
    DMatrix d(order);
    for (std::size_t i = 1; i <= order; ++i)
        for (std::size_t j = 1; j <= i; ++j) d(i, j) = d_entry(i, j);
    return d;
}

/// Exact inverse of D_K. D_K is unit lower triangular with integer entries,
/// so its inverse is too.
inline DMatrix d_inverse(std::size_t order) {
    const DMatrix d = d_matrix(order);
    DMatrix inv(order);
    for (std::size_t j = 1; j <= order; ++j) {
        inv(j, j) = 1;
        for (std::size_t i = j + 1; i <= order; ++i) {
            std::int64_t acc = 0;
            for (std::size_t k = j; k < i; ++k) acc = checked_add(acc, checked_mul(d(i, k), inv(k, j)));
            inv(i, j) = -acc;
        }
    }
    return inv;
}

/// Solves D_K x = v by forward substitution (long double accumulation; the
/// entries of D grow like binomial coefficients and the sums cancel).
inline std::vector<double> d_inverse_apply(std::size_t order, const std::vector<double>& v) {
    if (v.size() != order) throw InvalidParameter("d_inverse_apply: vector length must equal the order");
    const DMatrix d = d_matrix(order);
    std::vector<long double> x(order);
    for (std::size_t i = 1; i <= order; ++i) {
        long double acc = v[i - 1];
        for (std::size_t j = 1; j < i; ++j) acc -= static_cast<long double>(d(i, j)) * x[j - 1];
        x[i - 1] = acc;
    }
    return std::vector<double>(x.begin(), x.end());
}

/// D_K v, accumulated in long double.
inline std::vector<double> d_apply(std::size_t order, const std::vector<double>& v) {
    if (v.size() != order) throw InvalidParameter("d_apply: vector length must equal the order");
    const DMatrix d = d_matrix(order);
    std::vector<double> out(order, 0.0);
    for (std::size_t i = 1; i <= order; ++i) {
        long double acc = 0.0L;
        for (std::size_t j = 1; j <= i; ++j) acc += static_cast<long double>(d(i, j)) * v[j - 1];
        out[i - 1] = static_cast<double>(acc);
    }
    return out;
}

/// Coordinates of the corrective shift in Jacobi-coefficient space:
/// Standard (0, 0, xi, 0, xi, 0, ...), Shifted (-xi, 0, 0, ...).
inline std::vector<double> dw_vector(std::size_t order, double xi, SignedVariant variant) {
    std::vector<double> w(order, 0.0);
    if (variant == SignedVariant::Standard) {
        for (std::size_t k = 3; k <= order; k += 2) w[k - 1] = xi;
    } else if (order >= 1) {
        w[0] = -xi;
    }
    return w;
}

// ---------------------------------------------------------------------------
// Orthonormal polynomials of the semicircle law

/// Integer coefficients of p_k, the k-th orthonormal polynomial of mu_sc:
/// p_0 = 1, p_1 = x, p_{k+1} = x p_k - p_{k-1} (Chebyshev U_k(x/2)).
inline std::vector<std::int64_t> semicircle_orthonormal_poly_exact(std::size_t k) {
    std::vector<std::int64_t> prev{1};
    if (k == 0) return prev;
    std::vector<std::int64_t> cur{0, 1};
    for (std::size_t j = 1; j < k; ++j) {
        std::vector<std::int64_t> next(cur.size() + 1, 0);
        for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] = cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i) next[i] = checked_add(next[i], -prev[i]);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// p_k as a floating-point polynomial; every coefficient is an exactly
/// representable integer.
inline Polynomial semicircle_orthonormal_poly(std::size_t k) {
    const auto exact = semicircle_orthonormal_poly_exact(k);
    std::vector<double> c(exact.size());
    for (std::size_t i = 0; i < exact.size(); ++i) {
        if (std::abs(exact[i]) > (std::int64_t{1} << 53))
            throw OverflowGuard("orthonormal polynomial coefficient not exactly representable");
        c[i] = static_cast<double>(exact[i]);
    }
    return Polynomial(std::move(c));
}

/// int p dnu = c_0 * total_mass + sum_{j>=1} c_j m_j(nu).
///
/// The zeroth moment is not part of a MomentSequence; pass 1 for probability
/// measures and 0 for the signed zero-mass measures of the moderate
/// deviation rate.
inline double integrate_poly_against_moments(const Polynomial& p, const MomentSequence& m, double total_mass) {
    if (p.degree() > m.size())
        throw InvalidParameter("polynomial degree " + std::to_string(p.degree()) + " exceeds the " +
                               std::to_string(m.size()) + " available moments");
    std::vector<double> terms;
    terms.reserve(p.degree() + 1);
    terms.push_back(p.coefficient(0) * total_mass);
    for (std::size_t j = 1; j <= p.degree(); ++j) terms.push_back(p.coefficient(j) * m[j]);
    return pairwise_sum(terms);
}

/// int p dmu_sc, exact up to rounding of the final sum.
inline double semicircle_expectation(const Polynomial& p) {
    if (p.degree() == 0) return p.coefficient(0);
    return integrate_poly_against_moments(p, semicircle_moments(p.degree()), 1.0);
}

}  // namespace laguerre
