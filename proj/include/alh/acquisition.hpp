#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "alh/classifier.hpp"

namespace alh {

enum class Heuristic { Random, VariationRatios, Entropy, Bald };

inline constexpr std::array<Heuristic, 4> kAllHeuristics = {
    Heuristic::Random, Heuristic::VariationRatios, Heuristic::Entropy, Heuristic::Bald};

std::string to_string(Heuristic h);
Heuristic heuristic_from_string(const std::string& name);

// Per-class tallies of the row-wise argmax over a sample matrix. mode_count
// is the size of the largest tally.
struct ClassVotes {
    std::array<std::size_t, 2> counts = {0, 0};
    std::size_t total = 0;
    std::size_t mode_count = 0;
};

// Row-wise argmax votes; a row with equal probabilities votes for class 0.
ClassVotes class_votes(const ProbabilitySamples& samples);

// 1 - mode_count / passes. 0 when every pass agrees, at most 0.5 for binary
// classification with an even pass count.
double variation_ratio(const ProbabilitySamples& samples);

// Shannon entropy (bits) of the pass-averaged class distribution, with
// 0 log 0 taken as 0.
double predictive_entropy(const ProbabilitySamples& samples);

// Mutual information (bits): entropy of the mean distribution minus the mean
// of the per-pass entropies. Non-negative up to rounding.
double bald(const ProbabilitySamples& samples);

struct AcquisitionScore {
    std::string pair_id;
    double score = 0.0;  // higher = more uncertain = acquired first
};

// Scores every pool id with the chosen heuristic over `passes` stochastic
// forward passes. Each item draws its dropout masks from
// mix_seed(seed, fnv1a64(id)), so results do not depend on pool order.
std::vector<AcquisitionScore> score_pool(const MlpModel& model, const PairTable& table,
                                         std::span<const std::string> pool_ids, Heuristic heuristic,
                                         std::size_t passes, std::uint64_t seed);

// Top `batch_size` ids by score, ties broken toward the lexicographically
// smaller pair_id. Returns a sorted id vector of size min(batch, |scores|).
std::vector<std::string> select_batch(std::vector<AcquisitionScore> scores,
                                      std::size_t batch_size);

// Uniform sample without replacement from the pool (sorted result). The draw
// is taken over the sorted pool, so container order does not matter.
std::vector<std::string> select_batch_random(std::span<const std::string> pool_ids,
                                             std::size_t batch_size, std::uint64_t seed);

}  // namespace alh
