#include "alh/features.hpp"

#include <cctype>
#include <cmath>

#include "alh/errors.hpp"
#include "alh/rng.hpp"

namespace alh {

namespace {

bool is_token_byte(unsigned char c) {
    // ASCII alphanumerics plus any non-ASCII byte.
    return std::isalnum(c) != 0 || c >= 0x80;
}

}  // namespace

void FeatureConfig::validate() const {
    if (dimension == 0 || (dimension & (dimension - 1)) != 0)
        throw ConfigError("feature dimension must be a power of two, got " +
                          std::to_string(dimension));
    if (ngram_orders.empty()) throw ConfigError("ngram_orders must be non-empty");
    for (int n : ngram_orders)
        if (n < 1) throw ConfigError("ngram order must be >= 1, got " + std::to_string(n));
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (is_token_byte(c)) {
            current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c))
                                       : static_cast<char>(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<float> hash_block(std::string_view text, const FeatureConfig& config) {
    std::vector<float> block(config.dimension, 0.0f);
    const std::vector<std::string> tokens = tokenize(text);
    std::string gram;
    for (int order : config.ngram_orders) {
        if (tokens.size() < static_cast<std::size_t>(order)) continue;
        for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
            gram.clear();
            for (int k = 0; k < order; ++k) {
                if (k) gram.push_back('\x1F');
                gram += tokens[i + k];
            }
            // Low bits pick the bucket, the top bit picks the sign, so the
            // two stay independent for any power-of-two dimension.
            std::uint64_t h = mix_seed(config.hash_seed, fnv1a64(gram));
            std::size_t index = static_cast<std::size_t>(h & (config.dimension - 1));
            float sign = (h >> 63) ? -1.0f : 1.0f;
            block[index] += sign;
        }
    }
    double norm_sq = 0.0;
    for (float v : block) norm_sq += static_cast<double>(v) * v;
    if (norm_sq > 0.0) {
        const float inv = static_cast<float>(1.0 / std::sqrt(norm_sq));
        for (float& v : block) v *= inv;
    }
    return block;
}

FeatureVector featurize_pair(std::string_view text_a, std::string_view text_b,
                             const FeatureConfig& config) {
    config.validate();
    if (text_a.empty() || text_b.empty())
        throw DataError("featurize_pair requires non-empty texts");
    std::vector<float> a = hash_block(text_a, config);
    std::vector<float> b = hash_block(text_b, config);
    FeatureVector out;
    out.reserve(3 * config.dimension);
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    for (std::size_t i = 0; i < config.dimension; ++i) out.push_back(a[i] - b[i]);
    return out;
}

}  // namespace alh
