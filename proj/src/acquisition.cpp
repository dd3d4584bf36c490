#include "alh/acquisition.hpp"

#include <algorithm>
#include <cmath>

#include "alh/errors.hpp"
#include "alh/rng.hpp"

namespace alh {

namespace {

double entropy_bits(const std::array<double, 2>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

}  // namespace

std::string to_string(Heuristic h) {
    switch (h) {
        case Heuristic::Random: return "random";
        case Heuristic::VariationRatios: return "variation_ratios";
        case Heuristic::Entropy: return "entropy";
        case Heuristic::Bald: return "bald";
    }
    throw ConfigError("invalid heuristic value");
}

Heuristic heuristic_from_string(const std::string& name) {
    for (Heuristic h : kAllHeuristics)
        if (to_string(h) == name) return h;
    throw ConfigError("unknown heuristic '" + name +
                      "' (expected random, variation_ratios, entropy, or bald)");
}

ClassVotes class_votes(const ProbabilitySamples& samples) {
    samples.validate();
    ClassVotes votes;
    votes.total = samples.pass_count();
    for (const auto& row : samples.rows) {
        // Tie goes to the lower class index.
        const std::size_t winner = row[1] > row[0] ? 1 : 0;
        votes.counts[winner]++;
    }
    votes.mode_count = std::max(votes.counts[0], votes.counts[1]);
    return votes;
}

double variation_ratio(const ProbabilitySamples& samples) {
    const ClassVotes votes = class_votes(samples);
    return 1.0 - static_cast<double>(votes.mode_count) / static_cast<double>(votes.total);
}

double predictive_entropy(const ProbabilitySamples& samples) {
    samples.validate();
    return entropy_bits(samples.mean());
}

double bald(const ProbabilitySamples& samples) {
    samples.validate();
    double mean_row_entropy = 0.0;
    for (const auto& row : samples.rows) mean_row_entropy += entropy_bits(row);
    mean_row_entropy /= static_cast<double>(samples.pass_count());
    return entropy_bits(samples.mean()) - mean_row_entropy;
}

std::vector<AcquisitionScore> score_pool(const MlpModel& model, const PairTable& table,
                                         std::span<const std::string> pool_ids, Heuristic heuristic,
                                         std::size_t passes, std::uint64_t seed) {
    if (heuristic == Heuristic::Random)
        throw ConfigError("score_pool does not apply to the random baseline");
    if (pool_ids.empty()) throw DataError("score_pool on an empty pool");
    double (*scorer)(const ProbabilitySamples&) = nullptr;
    switch (heuristic) {
        case Heuristic::VariationRatios: scorer = variation_ratio; break;
        case Heuristic::Entropy: scorer = predictive_entropy; break;
        case Heuristic::Bald: scorer = bald; break;
        case Heuristic::Random: break;
    }
    std::vector<AcquisitionScore> scores;
    scores.reserve(pool_ids.size());
    for (const std::string& id : pool_ids) {
        const ProbabilitySamples samples = mc_predict(
            model, table.features[table.row(id)], passes, mix_seed(seed, fnv1a64(id)));
        scores.push_back({id, scorer(samples)});
    }
    return scores;
}

std::vector<std::string> select_batch(std::vector<AcquisitionScore> scores,
                                      std::size_t batch_size) {
    if (batch_size == 0) throw ConfigError("batch size must be >= 1");
    std::sort(scores.begin(), scores.end(), [](const AcquisitionScore& a, const AcquisitionScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.pair_id < b.pair_id;
    });
    const std::size_t take = std::min(batch_size, scores.size());
    std::vector<std::string> selected;
    selected.reserve(take);
    for (std::size_t i = 0; i < take; ++i) selected.push_back(scores[i].pair_id);
    std::sort(selected.begin(), selected.end());
    return selected;
}

std::vector<std::string> select_batch_random(std::span<const std::string> pool_ids,
                                             std::size_t batch_size, std::uint64_t seed) {
    if (batch_size == 0) throw ConfigError("batch size must be >= 1");
    std::vector<std::string> pool(pool_ids.begin(), pool_ids.end());
    std::sort(pool.begin(), pool.end());
    Rng rng(mix_seed(seed, fnv1a64("random-acquisition")));
    std::vector<std::string> selected = rng.sample(pool, batch_size);
    std::sort(selected.begin(), selected.end());
    return selected;
}

}  // namespace alh
