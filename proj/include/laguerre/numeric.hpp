#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace laguerre {

/// Pairwise (cascade) summation; error grows like O(log n) instead of O(n).
inline double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t block = 16;
    if (values.size() <= block) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

constexpr double pi = 3.14159265358979323846264338327950288;

}  // namespace laguerre
