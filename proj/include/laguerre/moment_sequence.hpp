#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace laguerre {

/// Finite prefix (m_1, ..., m_K) of the moments of a possibly signed measure.
///
/// Indexing is one-based to match the moment order: `m[k]` is m_k. The zeroth
/// moment is not stored; callers that integrate against the sequence declare
/// the total mass explicitly.
class MomentSequence {
public:
    MomentSequence() = default;

    explicit MomentSequence(std::vector<double> values) : values_(std::move(values)) {
        for (double v : values_) {
            if (!std::isfinite(v)) throw InvalidInput("moment sequence entries must be finite");
        }
    }

    MomentSequence(std::initializer_list<double> values)
        : MomentSequence(std::vector<double>(values)) {}

    std::size_t size() const noexcept { return values_.size(); }

    /// m_k for 1 <= k <= size().
    double operator[](std::size_t k) const { return values_[k - 1]; }

    double at(std::size_t k) const {
        if (k == 0 || k > values_.size()) throw InvalidParameter("moment index out of range");
        return values_[k - 1];
    }

    const std::vector<double>& values() const noexcept { return values_; }

    /// First `k` moments.
    MomentSequence truncated(std::size_t k) const {
        if (k > values_.size()) throw InvalidParameter("cannot truncate beyond available moments");
        return MomentSequence(std::vector<double>(values_.begin(), values_.begin() + k));
    }

    friend MomentSequence operator-(const MomentSequence& a, const MomentSequence& b) {
        if (a.size() != b.size()) throw InvalidParameter("moment sequences differ in length");
        std::vector<double> out(a.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values_[i] - b.values_[i];
        return MomentSequence(std::move(out));
    }

    friend bool operator==(const MomentSequence&, const MomentSequence&) = default;

private:
    std::vector<double> values_;
};

}  // namespace laguerre
