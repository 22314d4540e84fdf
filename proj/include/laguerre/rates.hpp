#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "moment_sequence.hpp"
#include "moments.hpp"
#include "numeric.hpp"
#include "polynomial.hpp"
#include "quadrature.hpp"

namespace laguerre {

/// Value of a rate function: a nonnegative real or +infinity.
class RateValue {
public:
    static RateValue finite(double v) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("rate value must be finite and nonnegative");
        return RateValue(v, false);
    }
    static RateValue infinity() { return RateValue(std::numeric_limits<double>::infinity(), true); }

    bool is_infinite() const noexcept { return infinite_; }
    double value() const noexcept { return value_; }

    friend RateValue operator+(RateValue a, RateValue b) {
        if (a.infinite_ || b.infinite_) return infinity();
        return finite(a.value_ + b.value_);
    }

private:
    RateValue(double v, bool inf) : value_(v), infinite_(inf) {}
    double value_;
    bool infinite_;
};

// ---------------------------------------------------------------------------
// Large deviations

/// F(x) = int_2^|x| sqrt(y^2 - 4) dy, in closed form.
inline double f_outlier(double x) {
    const double a = std::abs(x);
    if (!(a >= 2.0)) throw InvalidParameter("F(x) is defined only for |x| >= 2");
    if (std::isinf(a)) return std::numeric_limits<double>::infinity();
    const double s = std::sqrt((a - 2.0) * (a + 2.0));
    return 0.5 * a * s - 2.0 * std::log1p(0.5 * (a - 2.0 + s));
}

inline double semicircle_density(double x) {
    if (std::abs(x) >= 2.0) return 0.0;
    return std::sqrt(4.0 - x * x) / (2.0 * pi);
}

inline double arcsine_density(double x) {
    if (std::abs(x) >= 2.0) return 0.0;
    return 1.0 / (pi * std::sqrt(4.0 - x * x));
}

/// Point mass outside the bulk.
struct Atom {
    double location = 0.0;
    double mass = 0.0;
};

/// Probability measure made of an absolutely continuous part on [-2, 2] and
/// finitely many atoms with |location| >= 2.
///
/// The bulk density must be reentrant; it is sampled at quadrature nodes only.
class AcPlusAtoms {
public:
    static constexpr double mass_tolerance = 1e-8;
    static constexpr std::size_t default_nodes = 20000;

    AcPlusAtoms(std::function<double(double)> density_on_bulk, std::vector<Atom> atoms,
                std::size_t quadrature_nodes = default_nodes)
        : density_(std::move(density_on_bulk)), atoms_(std::move(atoms)), nodes_(quadrature_nodes) {
        if (!density_) throw InvalidParameter("bulk density handle is empty");
        double total = 0.0;
        for (const Atom& a : atoms_) {
            // |x| = 2 is accepted: it sits on the bulk edge and F(2) = 0
            if (!(std::abs(a.location) >= 2.0) || !std::isfinite(a.location))
                throw InvalidParameter("atom at " + std::to_string(a.location) + " lies inside (-2, 2)");
            if (!(a.mass > 0.0)) throw InvalidParameter("atom masses must be positive");
            total += a.mass;
        }
        const auto rule = gauss_chebyshev_first_kind(nodes_);
        const double bulk = rule.apply([this](double x) { return checked_density(x) * std::sqrt(4.0 - x * x); });
        total += bulk;
        if (std::abs(total - 1.0) > mass_tolerance)
            throw InvalidInput("measure has total mass " + std::to_string(total) + ", expected 1");
    }

    double density(double x) const { return density_(x); }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t quadrature_nodes() const noexcept { return nodes_; }

    /// Density sample, rejecting negative or non-finite values.
    double checked_density(double x) const {
        const double f = density_(x);
        if (!std::isfinite(f) || f < 0.0)
            throw InvalidInput("bulk density at " + std::to_string(x) + " is negative or not finite");
        return f;
    }

private:
    std::function<double(double)> density_;
    std::vector<Atom> atoms_;
    std::size_t nodes_;
};

/// Floor below which a bulk density sample counts as zero.
inline constexpr double density_floor = 1e-300;

/// Relative entropy K(mu_sc | mu) = int log(f_sc / f_mu) f_sc dx over (-2, 2).
///
/// Gauss-Chebyshev quadrature of the first kind, so the nodes never touch
/// +-2. Infinite when the bulk density drops below 1e-300 at any node.
inline RateValue kl_semicircle(const AcPlusAtoms& mu) {
    const auto rule = gauss_chebyshev_first_kind(mu.quadrature_nodes());
    std::vector<double> terms(rule.nodes.size());
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double x = rule.nodes[j];
        const double f = mu.checked_density(x);
        if (f < density_floor) return RateValue::infinity();
        const double root = std::sqrt(4.0 - x * x);
        const double fsc = root / (2.0 * pi);
        terms[j] = rule.weights[j] * std::log(fsc / f) * fsc * root;
    }
    // quadrature can dip a few ulps below the true minimum of zero
    return RateValue::finite(std::max(0.0, pairwise_sum(terms)));
}

/// I(mu) = K(mu_sc | mu) + sum over atoms of F(location).
inline RateValue ldp_rate(const AcPlusAtoms& mu) {
    RateValue rate = kl_semicircle(mu);
    if (rate.is_infinite()) return rate;
    double outliers = 0.0;
    for (const Atom& a : mu.atoms()) outliers += f_outlier(a.location);
    return rate + RateValue::finite(outliers);
}

// ---------------------------------------------------------------------------
// Moderate deviations

inline constexpr std::size_t default_mdp_truncation = 15;

namespace detail {
inline void check_mdp_args(const MomentSequence& m, double xi, std::size_t truncation) {
    if (truncation == 0) throw InvalidParameter("MDP truncation must be at least 1");
    if (truncation > m.size())
        throw InvalidParameter("MDP truncation " + std::to_string(truncation) + " exceeds the " +
                               std::to_string(m.size()) + " supplied moments");
    if (!(xi >= 0.0)) throw InvalidParameter("xi must be nonnegative");
}
}  // namespace detail

/// (1/2) || D_K^{-1} (m_[K] - D_K w_[K]) ||^2.
inline double mdp_rate_dinv_norm(const MomentSequence& m, double xi, SignedVariant variant,
                                 std::size_t truncation = default_mdp_truncation) {
    detail::check_mdp_args(m, xi, truncation);
    const auto dw = d_apply(truncation, dw_vector(truncation, xi, variant));
    std::vector<double> diff(truncation);
    for (std::size_t k = 1; k <= truncation; ++k) diff[k - 1] = m[k] - dw[k - 1];
    const auto coords = d_inverse_apply(truncation, diff);
    std::vector<double> squares(truncation);
    for (std::size_t k = 0; k < truncation; ++k) squares[k] = coords[k] * coords[k];
    return 0.5 * pairwise_sum(squares);
}

/// Truncated moderate-deviation rate
///     (1/2) sum_{k=1}^{K} ( int p_k d(mu_m - nu) )^2
/// with p_k orthonormal for mu_sc and mu_m, nu of total mass zero (so the
/// k = 0 term vanishes identically).
///
/// The D^{-1}-norm form is evaluated alongside; a relative disagreement
/// above 1e-10 is reported as a numerical failure.
inline RateValue mdp_rate_series(const MomentSequence& m, double xi, SignedVariant variant,
                                 std::size_t truncation = default_mdp_truncation) {
    detail::check_mdp_args(m, xi, truncation);
    const MomentSequence diff = m.truncated(truncation) - nu_moments(SignedMeasureSpec(xi, variant), truncation);
    std::vector<double> squares(truncation);
    for (std::size_t k = 1; k <= truncation; ++k) {
        const double proj = integrate_poly_against_moments(semicircle_orthonormal_poly(k), diff, 0.0);
        squares[k - 1] = proj * proj;
    }
    const double series = 0.5 * pairwise_sum(squares);
    const double norm_form = mdp_rate_dinv_norm(m, xi, variant, truncation);
    if (std::abs(series - norm_form) > 1e-10 * std::max(1.0, std::abs(series))) {
        throw NumericalFailure("MDP rate: series form " + std::to_string(series) + " and D^-1 form " +
                               std::to_string(norm_form) + " disagree");
    }
    return RateValue::finite(series);
}

/// d nu / d mu_sc: xi x(x^2-3)/(4-x^2) for nu_xi, -xi x for nu-hat_xi.
inline double nu_relative_density(const SignedMeasureSpec& spec, double x) {
    if (spec.variant == SignedVariant::Shifted) return -spec.xi * x;
    if (std::abs(x) >= 2.0) throw DomainSingularity("d nu_xi / d mu_sc is singular at x = +-2");
    return spec.xi * x * (x * x - 3.0) / (4.0 - x * x);
}

/// (1/2) int (g - d nu / d mu_sc)^2 d mu_sc for a candidate density g.
///
/// Gauss quadrature for mu_sc with the node count doubled until two
/// successive estimates agree to 1e-10 (relative). d nu_xi / d mu_sc is not
/// square integrable, so unless g cancels its edge singularity the estimates
/// keep growing; that is reported as an infinite rate.
inline RateValue mdp_rate_density(const std::function<double(double)>& g, double xi, SignedVariant variant) {
    const SignedMeasureSpec spec(xi, variant);
    auto estimate = [&](std::size_t nodes) {
        const auto rule = gauss_semicircle(nodes);
        return 0.5 * rule.apply([&](double x) {
            const double gx = g(x);
            if (!std::isfinite(gx)) throw InvalidInput("candidate density is not finite at " + std::to_string(x));
            const double h = gx - nu_relative_density(spec, x);
            return h * h;
        });
    };
    constexpr std::size_t max_nodes = std::size_t{1} << 16;
    double previous = estimate(64);
    double current = previous;
    for (std::size_t nodes = 128; nodes <= max_nodes; nodes *= 2) {
        current = estimate(nodes);
        if (std::abs(current - previous) <= 1e-10 * std::max(1.0, std::abs(current)))
            return RateValue::finite(current);
        if (nodes == max_nodes && current > 1.5 * previous) return RateValue::infinity();
        previous = current;
    }
    return RateValue::finite(current);
}

}  // namespace laguerre
