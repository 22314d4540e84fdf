#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "moments.hpp"
#include "quadrature.hpp"

namespace laguerre {

/// Outcome of one exact identity check. Integer checks report max_error 0 or
/// the first absolute mismatch; the quadrature check reports the largest
/// relative deviation.
struct IdentityCheck {
    std::string name;
    std::size_t order = 0;
    bool passed = false;
    double max_error = 0.0;
    std::string detail;
};

/// Largest order for which all identity checks run in exact int64 arithmetic.
inline constexpr std::size_t identity_order_cap = 20;

/// (D_K D_K^T)_{ij} = m_{i+j}(mu_sc) - m_i(mu_sc) m_j(mu_sc), exactly.
inline IdentityCheck check_covariance_identity(std::size_t order) {
    const DMatrix d = d_matrix(order);
    IdentityCheck c{"covariance", order, true, 0.0, ""};
    for (std::size_t i = 1; i <= order && c.passed; ++i) {
        for (std::size_t j = 1; j <= order; ++j) {
            std::int64_t lhs = 0;
            for (std::size_t l = 1; l <= std::min(i, j); ++l) lhs = checked_add(lhs, checked_mul(d(i, l), d(j, l)));
            const std::int64_t rhs = checked_add(
                semicircle_moment_exact(i + j),
                -checked_mul(semicircle_moment_exact(i), semicircle_moment_exact(j)));
            if (lhs != rhs) {
                c.passed = false;
                c.max_error = std::abs(static_cast<double>(lhs - rhs));
                c.detail = "mismatch at (" + std::to_string(i) + "," + std::to_string(j) + ")";
                break;
            }
        }
    }
    return c;
}

/// (D w)_k equals the integer part of m_k(nu_1) (Standard) or m_k(nu-hat_1)
/// (Shifted), the telescoping sum evaluated in integers.
inline IdentityCheck check_dw_identity(std::size_t order, SignedVariant variant) {
    const DMatrix d = d_matrix(order);
    std::vector<std::int64_t> w(order, 0);
    if (variant == SignedVariant::Standard) {
        for (std::size_t k = 3; k <= order; k += 2) w[k - 1] = 1;
    } else {
        w[0] = -1;
    }
    IdentityCheck c{variant == SignedVariant::Standard ? "dw_standard" : "dw_shifted", order, true, 0.0, ""};
    for (std::size_t k = 1; k <= order; ++k) {
        std::int64_t acc = 0;
        for (std::size_t j = 1; j <= k; ++j) acc = checked_add(acc, checked_mul(d(k, j), w[j - 1]));
        const std::int64_t expected = nu_moment_unit(variant, k);
        if (acc != expected) {
            c.passed = false;
            c.max_error = std::abs(static_cast<double>(acc - expected));
            c.detail = "mismatch at k=" + std::to_string(k);
            break;
        }
    }
    return c;
}

/// Row k of D_K^{-1} equals the coefficients of x^1..x^k in p_k.
inline IdentityCheck check_dinverse_rows(std::size_t order) {
    const DMatrix inv = d_inverse(order);
    IdentityCheck c{"dinverse_rows", order, true, 0.0, ""};
    for (std::size_t k = 1; k <= order && c.passed; ++k) {
        const auto p = semicircle_orthonormal_poly_exact(k);
        for (std::size_t j = 1; j <= order; ++j) {
            const std::int64_t expected = j < p.size() ? p[j] : 0;
            if (inv(k, j) != expected) {
                c.passed = false;
                c.max_error = std::abs(static_cast<double>(inv(k, j) - expected));
                c.detail = "mismatch at (" + std::to_string(k) + "," + std::to_string(j) + ")";
                break;
            }
        }
    }
    return c;
}

/// Moments of nu_1 / nu-hat_1 against Gauss-Chebyshev quadrature of the
/// densities. Both densities times sqrt(4 - x^2) are polynomials, so the rule
/// is exact up to rounding.
inline IdentityCheck check_nu_quadrature(std::size_t order, SignedVariant variant, double tolerance = 1e-8) {
    const SignedMeasureSpec spec(1.0, variant);
    const auto rule = gauss_chebyshev_first_kind(order + 8);
    const auto exact = nu_moments(spec, order);
    IdentityCheck c{variant == SignedVariant::Standard ? "nu_quadrature_standard" : "nu_quadrature_shifted", order,
                    true, 0.0, ""};
    for (std::size_t k = 1; k <= order; ++k) {
        const double q = rule.apply([&](double x) {
            return std::pow(x, static_cast<double>(k)) * nu_density(spec, x) * std::sqrt(4.0 - x * x);
        });
        const double err = std::abs(q - exact[k]) / std::max(1.0, std::abs(exact[k]));
        c.max_error = std::max(c.max_error, err);
    }
    c.passed = c.max_error <= tolerance;
    if (!c.passed) c.detail = "relative deviation above tolerance";
    return c;
}

/// All exact-identity checks at one order.
inline std::vector<IdentityCheck> run_identities(std::size_t order) {
    if (order == 0 || order > identity_order_cap)
        throw InvalidParameter("identity order must lie in [1, " + std::to_string(identity_order_cap) + "]");
    return {check_covariance_identity(order),
            check_dw_identity(order, SignedVariant::Standard),
            check_dw_identity(order, SignedVariant::Shifted),
            check_dinverse_rows(order),
            check_nu_quadrature(order, SignedVariant::Standard),
            check_nu_quadrature(order, SignedVariant::Shifted)};
}

}  // namespace laguerre
