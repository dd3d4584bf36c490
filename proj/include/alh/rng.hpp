#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string_view>
#include <vector>

namespace alh {

// Generator identity recorded in run artifacts. Splits, shuffles and weight
// initialization all flow through this generator, so replaying a seed is
// guaranteed to reproduce a run bit for bit.
inline constexpr std::string_view kRngName = "splitmix64-v1";

// SplitMix64 step (Steele, Lea, Flood 2014). Public domain constants.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stateless finalizer used for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) {
    std::uint64_t s = x;
    return splitmix64(s);
}

// Derives a child seed from a parent seed and a stream tag. Chaining calls
// gives position-independent sub-seeds: mix_seed(mix_seed(s, a), b).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(seed ^ (mix64(tag) + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2)));
}

// FNV-1a 64-bit over raw bytes; used for hashing ids and n-grams.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Deterministic pseudo-random stream. All sampling helpers are implemented
// here rather than via <random> distributions, whose output sequences the
// standard leaves unspecified.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(mix64(seed ^ 0xA5A5A5A5A5A5A5A5ULL)) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Unbiased integer in [0, n), n >= 1, by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; caches the spare deviate.
    double normal();

    bool bernoulli(double p) { return unit() < p; }

    // In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

    // Uniform sample of k items without replacement, preserving no particular
    // order; callers sort if they need a canonical set.
    template <typename T>
    std::vector<T> sample(const std::vector<T>& items, std::size_t k) {
        std::vector<T> pool = items;
        if (k > pool.size()) k = pool.size();
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(below(pool.size() - i));
            using std::swap;
            swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

  private:
    std::uint64_t state_;
    std::optional<double> spare_;
};

}  // namespace alh
