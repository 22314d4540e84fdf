#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace laguerre {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    /// sum_j weights[j] * f(nodes[j]), summed pairwise.
    template <class F>
    double apply(F&& f) const {
        std::vector<double> terms(nodes.size());
        for (std::size_t j = 0; j < nodes.size(); ++j) terms[j] = weights[j] * f(nodes[j]);
        return pairwise_sum(terms);
    }
};

/// Gauss-Chebyshev rule of the first kind on (-2, 2):
///     int_{-2}^{2} f(x) / sqrt(4 - x^2) dx  ~  (pi/N) sum_j f(2 cos((2j-1) pi / 2N)).
/// Exact for polynomial f of degree < 2N; no node touches +-2.
inline QuadratureRule gauss_chebyshev_first_kind(std::size_t count) {
    if (count == 0) throw InvalidParameter("quadrature needs at least one node");
    QuadratureRule rule;
    rule.nodes.resize(count);
    rule.weights.assign(count, pi / static_cast<double>(count));
    for (std::size_t j = 0; j < count; ++j) {
        rule.nodes[j] = 2.0 * std::cos((2.0 * static_cast<double>(j) + 1.0) * pi / (2.0 * static_cast<double>(count)));
    }
    return rule;
}

/// Gauss rule for the semicircle law: int f d(mu_sc). These are the eigenpairs
/// of the N x N free Jacobi matrix, x_j = 2 cos(j pi/(N+1)) with weights
/// (2/(N+1)) sin^2(j pi/(N+1)). Exact for polynomials of degree < 2N.
inline QuadratureRule gauss_semicircle(std::size_t count) {
    if (count == 0) throw InvalidParameter("quadrature needs at least one node");
    QuadratureRule rule;
    rule.nodes.resize(count);
    rule.weights.resize(count);
    const double h = pi / static_cast<double>(count + 1);
    for (std::size_t j = 0; j < count; ++j) {
        const double theta = static_cast<double>(j + 1) * h;
        const double s = std::sin(theta);
        rule.nodes[j] = 2.0 * std::cos(theta);
        rule.weights[j] = 2.0 / static_cast<double>(count + 1) * s * s;
    }
    return rule;
}

}  // namespace laguerre
