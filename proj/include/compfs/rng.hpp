#pragma once

#include <cstdint>
#include <cmath>
#include <random>
#include <vector>

namespace compfs {

/// Deterministic random source. Wraps std::mt19937_64 (bit-exact across
/// platforms by the standard) and hand-rolls the floating-point and shuffle
/// transforms, because the std distribution objects are implementation
/// defined and would break cross-compiler reproducibility.
class Rng {
public:
    /// Substream tags keep independent consumers (data generation, epoch
    /// shuffling, gate noise, parameter init) from perturbing one another:
    /// e.g. changing the number of learners must not change batch order.
    enum Stream : std::uint64_t {
        kData = 0x9e3779b97f4a7c15ull,
        kInit = 0xbf58476d1ce4e5b9ull,
        kShuffle = 0x94d049bb133111ebull,
        kGateNoise = 0xd6e8feb86659fd93ull,
    };

    explicit Rng(std::uint64_t seed, std::uint64_t stream = kData) {
        std::seed_seq seq{seed, stream};
        engine_.seed(seq);
        has_spare_ = false;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Standard normal via Box-Muller with a cached spare.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite.
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        return engine_() % n;
    }

    /// In-place Fisher-Yates shuffle (back-to-front).
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_;
};

}  // namespace compfs
