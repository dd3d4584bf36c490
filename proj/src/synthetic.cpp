#include "alh/synthetic.hpp"

#include <algorithm>
#include <cstdio>

#include "alh/errors.hpp"
#include "alh/rng.hpp"

namespace alh {

namespace {

std::string padded(const char* prefix, std::size_t value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, value);
    return buf;
}

// One argument text at the given strength level: `level` strong tokens and
// (5 - level) weak tokens, plus topic markers and filler.
std::string synth_text(std::size_t topic, std::size_t level, Rng& rng) {
    std::vector<std::string> tokens;
    tokens.push_back(padded(("t" + std::to_string(topic) + "x").c_str(), rng.below(12), 2));
    tokens.push_back(padded(("t" + std::to_string(topic) + "x").c_str(), rng.below(12), 2));
    for (std::size_t i = 0; i < 5; ++i)
        tokens.push_back(i < level ? padded("s", rng.below(30), 2) : padded("w", rng.below(30), 2));
    const std::size_t fillers = 3 + rng.below(4);
    for (std::size_t i = 0; i < fillers; ++i) tokens.push_back(padded("f", rng.below(150), 3));
    rng.shuffle(tokens);
    std::string text;
    for (const std::string& t : tokens) {
        if (!text.empty()) text.push_back(' ');
        text += t;
    }
    return text;
}

}  // namespace

Dataset make_synthetic_pairs(const SyntheticTextSpec& spec) {
    if (spec.topic_sizes.empty()) throw ConfigError("synthetic corpus needs at least one topic");
    Rng rng(mix_seed(spec.seed, fnv1a64("synthetic-pairs")));
    Dataset ds;
    std::size_t pair_counter = 0;
    for (std::size_t topic = 0; topic < spec.topic_sizes.size(); ++topic) {
        const std::string topic_name = padded("topic", topic, 2);
        ds.topics[static_cast<int>(topic)] = {topic_name, spec.topic_sizes[topic]};
        for (std::size_t k = 0; k < spec.topic_sizes[topic]; ++k) {
            std::size_t level_a = rng.below(6);
            std::size_t level_b = rng.below(6);
            while (level_b == level_a) level_b = rng.below(6);
            ArgumentPair p;
            p.pair_id = padded("p", pair_counter++, 6);
            p.topic_id = static_cast<int>(topic);
            if (spec.stance_tags)
                p.stance_tag = topic_name + (rng.bernoulli(0.5) ? "-pro" : "-con");
            p.text_a = synth_text(topic, level_a, rng);
            p.text_b = synth_text(topic, level_b, rng);
            p.label = level_a > level_b ? 0 : 1;
            if (spec.label_noise > 0.0 && rng.bernoulli(spec.label_noise)) p.label = 1 - p.label;
            ds.pairs.push_back(std::move(p));
        }
    }
    ds.validate();
    return ds;
}

PairTable make_gaussian_pool(const GaussianPoolSpec& spec) {
    Rng rng(mix_seed(spec.seed, fnv1a64("gaussian-pool")));
    std::vector<std::string> ids;
    std::vector<int> topics, labels;
    std::vector<FeatureVector> features;
    const std::size_t total = spec.pool_size + spec.holdout_size;
    ids.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        const bool in_pool = i < spec.pool_size;
        const int cls = static_cast<int>(i % 2);
        const double mu = cls == 0 ? -spec.separation : spec.separation;
        const float x0 = static_cast<float>(mu + rng.normal());
        const float x1 = static_cast<float>(rng.normal());
        int label = cls;
        if (in_pool) {
            // Drawn for every pool point so the clean and noisy variants of
            // one seed share identical coordinates.
            const bool flip = rng.bernoulli(spec.noise_rate);
            if (flip && std::abs(x0) < spec.noise_band) label = 1 - label;
        }
        ids.push_back(padded(in_pool ? "g" : "h", i, 6));
        topics.push_back(in_pool ? 0 : 1);
        labels.push_back(label);
        features.push_back({x0, x1});
    }
    return PairTable::from_rows(std::move(ids), std::move(topics), std::move(labels),
                                std::move(features));
}

}  // namespace alh
