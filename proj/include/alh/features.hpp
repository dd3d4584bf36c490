#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace alh {

// Hashed n-gram encoder settings. `dimension` is the width of one block and
// must be a power of two; the emitted vector is three blocks wide.
struct FeatureConfig {
    std::size_t dimension = 4096;
    std::vector<int> ngram_orders = {1, 2};
    std::uint64_t hash_seed = 0;

    void validate() const;
};

using FeatureVector = std::vector<float>;

// Lowercased ASCII tokens, split on runs of ASCII non-alphanumerics. Bytes
// >= 0x80 are kept inside tokens so multibyte UTF-8 sequences survive intact.
std::vector<std::string> tokenize(std::string_view text);

// Signed feature hashing of one text into a block of `config.dimension`
// counts, L2-normalized (all-zero when the text has no tokens).
std::vector<float> hash_block(std::string_view text, const FeatureConfig& config);

// Encodes an argument pair as [block(text_a) | block(text_b) | difference].
// The difference is taken between the normalized blocks, so swapping the two
// texts exchanges the first two blocks and negates the third.
FeatureVector featurize_pair(std::string_view text_a, std::string_view text_b,
                             const FeatureConfig& config);

}  // namespace alh
