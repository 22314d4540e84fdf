#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "ensembles.hpp"
#include "errors.hpp"
#include "moments.hpp"
#include "numeric.hpp"
#include "polynomial.hpp"
#include "rng.hpp"
#include "spectral.hpp"

namespace laguerre {

/// gamma_n = c n^a with a > 1 (parameter growing faster than n).
struct PowerLaw {
    double exponent = 2.0;
    double coefficient = 1.0;
};

/// gamma_n = n beta' / tau with 0 < tau <= 1 (the classical linear regime).
struct Linear {
    double tau = 1.0;
};

class GammaRule {
public:
    GammaRule(PowerLaw rule) : rule_(rule) {
        if (!(rule.exponent > 1.0) || !std::isfinite(rule.exponent))
            throw InvalidParameter("power-law gamma rule needs exponent > 1");
        if (!(rule.coefficient > 0.0) || !std::isfinite(rule.coefficient))
            throw InvalidParameter("power-law gamma rule needs a positive coefficient");
    }
    GammaRule(Linear rule) : rule_(rule) {
        if (!(rule.tau > 0.0 && rule.tau <= 1.0)) throw InvalidParameter("linear gamma rule needs 0 < tau <= 1");
    }

    double gamma(std::size_t n, double beta) const {
        const double nd = static_cast<double>(n);
        if (const auto* p = std::get_if<PowerLaw>(&rule_)) return p->coefficient * std::pow(nd, p->exponent);
        return nd * beta / 2.0 / std::get<Linear>(rule_).tau;
    }

    bool is_linear() const noexcept { return std::holds_alternative<Linear>(rule_); }
    const std::variant<PowerLaw, Linear>& rule() const noexcept { return rule_; }

private:
    std::variant<PowerLaw, Linear> rule_;
};

/// Index k of the moment m_k used as the statistic.
struct MomentIndex {
    std::size_t k = 1;
};

using Statistic = std::variant<Polynomial, MomentIndex>;

/// How the moments of each sampled spectral measure are obtained. Both give
/// the same measure: Operator reads <e_1, J^k e_1> off the Jacobi matrix in
/// O(k^2); Eigen diagonalizes it first in O(n^2).
enum class MomentRoute { Operator, Eigen };

/// Pass/fail thresholds. The defaults are the documented ones; any of them
/// can be overridden per experiment.
struct VerdictThresholds {
    double mean_band_se = 4.0;          ///< |mean - predicted| < band * SE
    double variance_ratio_low = 0.85;   ///< sample/predicted variance lower bound
    double variance_ratio_high = 1.15;  ///< sample/predicted variance upper bound
    double bias_allowance = 3.0;        ///< moment convergence: extra c / sqrt(n)
    double relative_tolerance = 0.05;   ///< Marchenko-Pastur relative band
};

inline constexpr std::size_t min_replicates_for_verdict = 100;

struct ExperimentConfig {
    std::size_t n = 100;
    double beta = 2.0;
    GammaRule gamma_rule = PowerLaw{2.0, 1.0};
    std::size_t replicates = 1000;
    std::uint64_t master_seed = 0;
    Statistic statistic = MomentIndex{1};
    std::optional<double> b_n;
    RescalingMode mode = RescalingMode::Standard;
    unsigned workers = 1;
    MomentRoute route = MomentRoute::Operator;
    VerdictThresholds thresholds;

    double gamma() const { return gamma_rule.gamma(n, beta); }
    double beta_prime() const noexcept { return beta / 2.0; }
    EnsembleParams params() const { return EnsembleParams(n, beta, gamma(), mode); }
};

struct ExperimentReport {
    std::string statistic;
    std::size_t n = 0;
    double beta = 0.0;
    double gamma = 0.0;
    double zeta_or_xi = 0.0;
    std::size_t replicates = 0;
    double predicted_mean = 0.0;
    double sample_mean = 0.0;
    double se_mean = 0.0;
    double z_score = 0.0;
    double predicted_var = 0.0;
    double sample_var = 0.0;
    bool verdict = false;
    std::string verdict_rule;
    std::vector<std::pair<std::string, double>> diagnostics;
    double wall_time_seconds = 0.0;
    std::vector<double> samples;
};

// ---------------------------------------------------------------------------
// Replication

/// Runs `per_replicate(rng, index)` for index = 0..replicates-1, each with
/// its own stream derived from (master_seed, index).
///
/// Results are stored by index, so the returned vector does not depend on
/// the number of workers. The first failure (lowest index) aborts the run.
template <class PerReplicate>
std::vector<double> run_replicated(const ExperimentConfig& config, PerReplicate&& per_replicate) {
    const std::size_t count = config.replicates;
    if (count == 0) throw InvalidParameter("replicates must be at least 1");
    std::vector<double> results(count, 0.0);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex failure_mutex;
    std::size_t failed_index = std::numeric_limits<std::size_t>::max();
    std::string failure_message;

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                RngState rng = RngState::derive(config.master_seed, i);
                results[i] = per_replicate(rng, i);
            } catch (const std::exception& e) {
                std::lock_guard lock(failure_mutex);
                if (i < failed_index) {
                    failed_index = i;
                    failure_message = e.what();
                }
                failed.store(true);
            }
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(count)));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failed.load()) throw ReplicateFailure(failed_index, failure_message);
    return results;
}

// ---------------------------------------------------------------------------
// Predictions

/// Limit mean and variance of sqrt(n beta')(int p dmu_n - int p dmu_sc):
///     mean     = int p d nu_zeta      (nu-hat_zeta under the shifted centering)
///     variance = int (p - int p dmu_sc)^2 dmu_sc.
inline std::pair<double, double> predicted_clt(const Polynomial& p, double zeta,
                                               SignedVariant variant = SignedVariant::Standard) {
    if (p.degree() > 20) throw InvalidParameter("predicted_clt supports polynomials of degree <= 20");
    const std::size_t order = std::max<std::size_t>(p.degree(), 1);
    const double mean = integrate_poly_against_moments(p, nu_moments(SignedMeasureSpec(zeta, variant), order), 0.0);
    const double first = semicircle_expectation(p);
    const double second = semicircle_expectation(p * p);
    return {mean, second - first * first};
}

namespace detail {

struct SampleSummary {
    double mean = 0.0;
    double variance = 0.0;
    double se = 0.0;
};

inline SampleSummary summarize(const std::vector<double>& x) {
    SampleSummary s;
    const double count = static_cast<double>(x.size());
    s.mean = pairwise_sum(x) / count;
    if (x.size() > 1) {
        std::vector<double> sq(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - s.mean) * (x[i] - s.mean);
        s.variance = pairwise_sum(sq) / (count - 1.0);
    }
    s.se = std::sqrt(s.variance / count);
    return s;
}

inline Polynomial statistic_polynomial(const Statistic& stat) {
    if (const auto* p = std::get_if<Polynomial>(&stat)) return *p;
    return Polynomial::monomial(std::get<MomentIndex>(stat).k);
}

/// Moment index of a statistic given either as k or as the monomial x^k.
inline std::size_t statistic_moment(const Statistic& stat) {
    if (const auto* m = std::get_if<MomentIndex>(&stat)) {
        if (m->k == 0) throw InvalidParameter("moment index must be at least 1");
        return m->k;
    }
    const auto& p = std::get<Polynomial>(stat);
    if (p.degree() >= 1 && p == Polynomial::monomial(p.degree())) return p.degree();
    throw InvalidParameter("this experiment needs a moment index k (or the monomial x^k) as statistic");
}

inline void check_replicates(const ExperimentConfig& config) {
    if (config.replicates < min_replicates_for_verdict)
        throw InvalidParameter("at least " + std::to_string(min_replicates_for_verdict) +
                               " replicates are needed for a statistical verdict");
}

inline SignedVariant variant_of(RescalingMode mode) {
    if (mode == RescalingMode::Shifted) return SignedVariant::Shifted;
    if (mode == RescalingMode::Standard) return SignedVariant::Standard;
    throw InvalidParameter("this experiment needs the standard or shifted centering");
}

/// First `order` moments of the spectral measure of `jacobi`.
inline MomentSequence sampled_moments(const JacobiCoefficients& jacobi, std::size_t order, MomentRoute route) {
    if (route == MomentRoute::Eigen) return moments_of_measure(eigen_spectral(jacobi), order);
    return moments_via_operator(jacobi, order);
}

inline void fill_summary(ExperimentReport& r, const ExperimentConfig& config, std::vector<double> samples) {
    const SampleSummary s = summarize(samples);
    r.n = config.n;
    r.beta = config.beta;
    r.gamma = config.gamma();
    r.replicates = config.replicates;
    r.sample_mean = s.mean;
    r.sample_var = s.variance;
    r.se_mean = s.se;
    r.z_score = s.se > 0.0 ? (s.mean - r.predicted_mean) / s.se : 0.0;
    r.samples = std::move(samples);
}

inline std::string band_text(double v) { return format_real(v); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Experiments

/// Monte Carlo check of the polynomial CLT for the spectral measure.
///
/// Each replicate yields S = sqrt(n beta')(int p dmu_n - int p dmu_sc); the
/// sample mean and variance of S are compared with predicted_clt(p, zeta_n),
/// zeta_n = n beta' / sqrt(gamma_n) evaluated at the configured n.
inline ExperimentReport run_clt(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    detail::check_replicates(config);
    const SignedVariant variant = detail::variant_of(config.mode);
    const Polynomial p = detail::statistic_polynomial(config.statistic);
    const EnsembleParams params = config.params();
    const double bp = config.beta_prime();
    const double zeta = static_cast<double>(config.n) * bp / std::sqrt(params.gamma());
    const double root = std::sqrt(static_cast<double>(config.n) * bp);
    const double limit_value = semicircle_expectation(p);
    const std::size_t order = std::max<std::size_t>(p.degree(), 1);

    auto samples = run_replicated(config, [&](RngState& rng, std::size_t) {
        const auto moments = detail::sampled_moments(sample_rescaled_jacobi(rng, params), order, config.route);
        return root * (integrate_poly_against_moments(p, moments, 1.0) - limit_value);
    });

    ExperimentReport r;
    r.statistic = "clt[" + to_string(p) + "]";
    r.zeta_or_xi = zeta;
    std::tie(r.predicted_mean, r.predicted_var) = predicted_clt(p, zeta, variant);
    detail::fill_summary(r, config, std::move(samples));
    const auto& t = config.thresholds;
    const bool mean_ok = std::abs(r.sample_mean - r.predicted_mean) < t.mean_band_se * r.se_mean ||
                         (r.se_mean == 0.0 && r.sample_mean == r.predicted_mean);
    bool var_ok;
    if (r.predicted_var > 0.0) {
        const double ratio = r.sample_var / r.predicted_var;
        var_ok = ratio >= t.variance_ratio_low && ratio <= t.variance_ratio_high;
    } else {
        var_ok = r.sample_var <= 1e-20;
    }
    r.verdict = mean_ok && var_ok;
    r.verdict_rule = "|sample_mean - predicted_mean| < " + detail::band_text(t.mean_band_se) +
                     "*se_mean and sample_var/predicted_var in [" + detail::band_text(t.variance_ratio_low) + ", " +
                     detail::band_text(t.variance_ratio_high) + "]";
    r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/// Largest moment index used in convergence experiments.
inline constexpr std::size_t convergence_moment_cap = 8;

/// Average of m_k(mu_n) over replicates against m_k(mu_sc).
///
/// Pass when |average - m_k(mu_sc)| < band * SE + bias_allowance / sqrt(n).
/// For odd k the first-order finite-n shift m_k(nu_zeta)/sqrt(n beta') is
/// attached as a diagnostic only.
inline ExperimentReport run_moment_convergence(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    detail::check_replicates(config);
    const SignedVariant variant = detail::variant_of(config.mode);
    const std::size_t k = detail::statistic_moment(config.statistic);
    if (k > convergence_moment_cap) throw InvalidParameter("moment convergence supports k <= 8");
    const EnsembleParams params = config.params();
    const double bp = config.beta_prime();
    const double nd = static_cast<double>(config.n);
    const double zeta = nd * bp / std::sqrt(params.gamma());

    auto samples = run_replicated(config, [&](RngState& rng, std::size_t) {
        return detail::sampled_moments(sample_rescaled_jacobi(rng, params), k, config.route)[k];
    });

    ExperimentReport r;
    r.statistic = "moment[k=" + std::to_string(k) + "]";
    r.zeta_or_xi = zeta;
    r.predicted_mean = static_cast<double>(semicircle_moment_exact(k));
    r.predicted_var = predicted_clt(Polynomial::monomial(k), 0.0).second / (nd * bp);
    detail::fill_summary(r, config, std::move(samples));
    const auto& t = config.thresholds;
    const double allowance = t.bias_allowance / std::sqrt(nd);
    r.verdict = std::abs(r.sample_mean - r.predicted_mean) < t.mean_band_se * r.se_mean + allowance;
    r.verdict_rule = "|sample_mean - predicted_mean| < " + detail::band_text(t.mean_band_se) + "*se_mean + " +
                     detail::band_text(t.bias_allowance) + "/sqrt(n)";
    if (k % 2 == 1) {
        const double shift = nu_moments(SignedMeasureSpec(zeta, variant), k)[k] / std::sqrt(nd * bp);
        r.diagnostics.emplace_back("first_order_shift", shift);
        r.diagnostics.emplace_back("observed_shift", r.sample_mean - r.predicted_mean);
    }
    r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/// Location of the moderate-deviation minimum.
///
/// Each replicate yields m_k(nu_n) with nu_n = sqrt(n beta'/b_n)(mu_n - mu_sc);
/// the average is compared with m_k(nu_{xi_n}), xi_n = n beta'/sqrt(b_n gamma_n).
/// Only the mean is tested; tail probabilities are not estimated.
inline ExperimentReport run_mdp_centering(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    detail::check_replicates(config);
    const SignedVariant variant = detail::variant_of(config.mode);
    if (!config.b_n) throw InvalidParameter("MDP centering needs b_n");
    const double bn = *config.b_n;
    const double nd = static_cast<double>(config.n);
    if (!(bn > 1.0 && bn < nd)) throw InvalidParameter("MDP centering needs 1 < b_n < n");
    const std::size_t k = detail::statistic_moment(config.statistic);
    if (k > 20) throw InvalidParameter("MDP centering supports k <= 20");
    const EnsembleParams params = config.params();
    const double bp = config.beta_prime();
    const double xi = nd * bp / std::sqrt(bn * params.gamma());
    const double factor = std::sqrt(nd * bp / bn);
    const double limit_value = static_cast<double>(semicircle_moment_exact(k));

    auto samples = run_replicated(config, [&](RngState& rng, std::size_t) {
        const double mk = detail::sampled_moments(sample_rescaled_jacobi(rng, params), k, config.route)[k];
        return factor * (mk - limit_value);
    });

    ExperimentReport r;
    r.statistic = "mdp[k=" + std::to_string(k) + "]";
    r.zeta_or_xi = xi;
    r.predicted_mean = nu_moments(SignedMeasureSpec(xi, variant), k)[k];
    r.predicted_var = predicted_clt(Polynomial::monomial(k), 0.0).second / bn;
    detail::fill_summary(r, config, std::move(samples));
    const auto& t = config.thresholds;
    r.verdict = std::abs(r.sample_mean - r.predicted_mean) < t.mean_band_se * r.se_mean;
    r.verdict_rule = "|sample_mean - predicted_mean| < " + detail::band_text(t.mean_band_se) + "*se_mean";
    r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/// Law of large numbers in the linear regime gamma_n = n beta'/tau.
///
/// The uncentered matrix is divided by 2 gamma_n = n beta / tau, under which
/// the recursion coefficients tend to d_1 = 1, d_k = 1 + tau, c_k = sqrt(tau)
/// and the moments to those of MP(tau). (Dividing by n beta instead gives
/// MP(tau) dilated by 1/tau; the two agree at tau = 1.)
inline ExperimentReport run_mp_sanity(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    detail::check_replicates(config);
    const auto* linear = std::get_if<Linear>(&config.gamma_rule.rule());
    if (!linear) throw InvalidParameter("Marchenko-Pastur sanity check needs a linear gamma rule");
    const std::size_t k = detail::statistic_moment(config.statistic);
    if (k > convergence_moment_cap) throw InvalidParameter("Marchenko-Pastur sanity check supports k <= 8");
    const EnsembleParams params(config.n, config.beta, config.gamma(), RescalingMode::None);
    const double nd = static_cast<double>(config.n);
    const double scale = 2.0 * params.gamma();

    auto samples = run_replicated(config, [&](RngState& rng, std::size_t) {
        const auto raw = sample_laguerre_tridiagonal(rng, params);
        std::vector<double> diag(raw.diag()), offdiag(raw.offdiag());
        for (double& d : diag) d /= scale;
        for (double& c : offdiag) c /= scale;
        return detail::sampled_moments(JacobiCoefficients(std::move(diag), std::move(offdiag)), k, config.route)[k];
    });

    ExperimentReport r;
    r.statistic = "mp[k=" + std::to_string(k) + "]";
    r.zeta_or_xi = nd * config.beta_prime() / std::sqrt(params.gamma());
    r.predicted_mean = mp_moments(k, linear->tau)[k];
    r.predicted_var = std::numeric_limits<double>::quiet_NaN();
    detail::fill_summary(r, config, std::move(samples));
    const auto& t = config.thresholds;
    r.verdict = std::abs(r.sample_mean - r.predicted_mean) < t.relative_tolerance * std::abs(r.predicted_mean);
    r.verdict_rule = "|sample_mean - predicted_mean| < " + detail::band_text(t.relative_tolerance) +
                     "*|predicted_mean|";
    r.diagnostics.emplace_back("tau", linear->tau);
    r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace laguerre
