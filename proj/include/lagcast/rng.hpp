#pragma once

#include <cstdint>
#include <vector>

namespace lagcast {

/// SplitMix64 generator. Used everywhere randomness is needed so that results
/// are reproducible bit-for-bit across platforms and thread counts; the
/// standard <random> distributions are implementation-defined and are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [0, bound) by rejection, bound >= 1.
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    /// First k entries of a random permutation of 0..n-1 (sampling without replacement).
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
            std::size_t j = i + static_cast<std::size_t>(next_below(n - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k < n ? k : n);
        return idx;
    }

private:
    std::uint64_t state_;
};

/// Stable sub-seed for a component of a seeded computation (tree index, model
/// kind, fold number). Derivation depends only on (seed, salt), never on
/// scheduling order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
    return rng.next_u64();
}

} // namespace lagcast
