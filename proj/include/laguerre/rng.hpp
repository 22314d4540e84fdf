#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace laguerre {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of replicate `index` under `master_seed`.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return mix64(mix64(master_seed) ^ mix64(index ^ 0xD1B54A32D192ED03ULL));
}

/// Deterministic pseudorandom stream.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard, and
/// derives uniforms and normals by hand instead of through the <random>
/// distributions (those are implementation-defined). The same seed therefore
/// gives bit-identical streams on every conforming toolchain.
///
/// Single owner: not safe to share between threads.
class RngState {
public:
    explicit RngState(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    /// Child stream `index`, independent of the parent's position.
    static RngState derive(std::uint64_t master_seed, std::uint64_t index) {
        return RngState(derive_seed(master_seed, index));
    }

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by the Marsaglia polar method.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        has_spare_ = true;
        return u * scale;
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace laguerre
