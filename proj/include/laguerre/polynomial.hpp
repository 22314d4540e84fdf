#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace laguerre {

/// Real polynomial in the monomial basis, c_0 + c_1 x + ... + c_d x^d.
///
/// Trailing zero coefficients are trimmed so the leading coefficient is
/// nonzero; the zero polynomial has an empty coefficient list and degree 0.
class Polynomial {
public:
    Polynomial() = default;

    explicit Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
        for (double c : coeffs_) {
            if (!std::isfinite(c)) throw InvalidInput("polynomial coefficients must be finite");
        }
        while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
    }

    Polynomial(std::initializer_list<double> coefficients)
        : Polynomial(std::vector<double>(coefficients)) {}

    static Polynomial monomial(std::size_t k, double scale = 1.0) {
        std::vector<double> c(k + 1, 0.0);
        c[k] = scale;
        return Polynomial(std::move(c));
    }

    bool is_zero() const noexcept { return coeffs_.empty(); }
    std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

    /// Coefficient of x^j; zero beyond the degree.
    double coefficient(std::size_t j) const noexcept {
        return j < coeffs_.size() ? coeffs_[j] : 0.0;
    }

    const std::vector<double>& coefficients() const noexcept { return coeffs_; }

    /// Horner evaluation.
    double operator()(double x) const noexcept {
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(out));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<double> out(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coefficient(i) + b.coefficient(i);
        return Polynomial(std::move(out));
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<double> out(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coefficient(i) - b.coefficient(i);
        return Polynomial(std::move(out));
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<double> coeffs_;
};

/// Shortest round-trip decimal form of a double.
inline std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Compact text form such as "1+2x-0.5x^2"; the zero polynomial is "0".
inline std::string to_string(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (std::size_t j = 0; j <= p.degree(); ++j) {
        const double c = p.coefficient(j);
        if (c == 0.0) continue;
        const double mag = std::abs(c);
        if (c < 0.0) out += '-';
        else if (!out.empty()) out += '+';
        if (j == 0 || mag != 1.0) out += format_real(mag);
        if (j >= 1) out += 'x';
        if (j >= 2) out += '^' + std::to_string(j);
    }
    return out;
}

}  // namespace laguerre
