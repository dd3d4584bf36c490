#pragma once

#include <cstdint>
#include <vector>

#include "alh/corpus.hpp"
#include "alh/data.hpp"

namespace alh {

// Synthetic pairwise-strength corpus. Each argument is a short token string
// whose latent strength is the count of "s##" tokens minus "w##" tokens; the
// label says which side of the pair carries more strength. The signal
// survives hashed bag-of-ngrams featurization, so classifiers can learn it.
struct SyntheticTextSpec {
    std::vector<std::size_t> topic_sizes = {380, 480, 560, 580};
    std::uint64_t seed = 42;
    double label_noise = 0.0;  // probability of flipping a pair's label
    bool stance_tags = false;  // emit two stance groups per topic ("-pro"/"-con")
};

Dataset make_synthetic_pairs(const SyntheticTextSpec& spec);

// Two-Gaussian pool for feature-level experiments: class means at
// (-separation, 0) and (+separation, 0), unit variance, 2-d features.
// Pool points carry topic 0; the holdout (always clean) carries topic 1.
// Labels of pool points with |x0| < noise_band flip with noise_rate.
struct GaussianPoolSpec {
    std::size_t pool_size = 5000;
    std::size_t holdout_size = 1000;
    double separation = 1.5;
    std::uint64_t seed = 0;
    double noise_rate = 0.0;
    double noise_band = 0.8;
};

PairTable make_gaussian_pool(const GaussianPoolSpec& spec);

}  // namespace alh
