#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace alh {

// One labeled pair of same-topic arguments. `label` says which side is the
// stronger argument: 0 = first text, 1 = second text.
struct ArgumentPair {
    std::string pair_id;
    int topic_id = 0;
    std::optional<std::string> stance_tag;  // raw stance group, kept for audit
    std::string text_a;
    std::string text_b;
    int label = 0;
};

struct TopicInfo {
    std::string name;
    std::size_t pair_count = 0;
};

struct Dataset {
    std::vector<ArgumentPair> pairs;      // file order preserved
    std::map<int, TopicInfo> topics;      // topic_id -> name, count

    void validate() const;                 // checks all type invariants
    void rebuild_topic_counts();
};

// Declares where each logical field lives in a TSV file. `stance_column` may
// name the same column as `topic_column`; an empty optional means the input
// carries no stance groups.
struct ColumnMapping {
    std::string id_column;
    std::string topic_column;
    std::optional<std::string> stance_column;
    std::string label_column;
    std::string text_a_column;
    std::string text_b_column;
    enum class LabelEncoding { Numeric, A1A2 } label_encoding = LabelEncoding::Numeric;

    // Named presets: "canonical", "ukp", "ibm".
    static ColumnMapping preset(const std::string& name);
};

// Reads a UTF-8 TSV with a header row. Topic cells that are all non-negative
// integers become topic ids directly; otherwise ids are assigned by first
// appearance. Throws DataError with the physical line number on any
// malformed row (missing column, duplicate id, empty text, bad label).
Dataset load_tsv(const std::string& path, const ColumnMapping& mapping);

// Writes the canonical TSV layout: id, topic, stance, label (0/1), text_a,
// text_b. Re-ingesting the output with the "canonical" preset is a fixpoint.
void save_canonical_tsv(const Dataset& dataset, const std::string& path);

// Collapses stance groups: every pair whose stance_tag reads
// "<base><sep><stance>" lands in the topic named <base>. Pairs without a tag
// keep their topic name as the group key; a dataset with no tags at all is
// returned unchanged. Pair order and count are preserved.
Dataset merge_stances(const Dataset& raw, char separator = '-');

// (smallest, median, largest) topic by pair count. Even topic counts take the
// lower-middle size as the median; equal sizes resolve to the lower topic id.
std::tuple<int, int, int> select_representative_topics(const Dataset& dataset);

// The id/topic view of a dataset that split construction works on.
struct PairIndex {
    std::vector<std::pair<std::string, int>> entries;  // (pair_id, topic_id)

    static PairIndex from(const Dataset& dataset);
    std::vector<int> topic_ids() const;
};

// One cross-validation fold. All three id vectors are sorted (they are sets);
// the split is a pure function of (index, holdout_topic, seed, sizes).
struct FoldSplit {
    int holdout_topic = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> train_ids;
    std::vector<std::string> validation_ids;
    std::vector<std::string> initial_batch_ids;
};

// Splits the non-holdout pairs into validation (round(fraction * n), half-up)
// and train, then draws the initial batch from train. Same arguments, same
// split, always.
FoldSplit make_fold(const PairIndex& index, int holdout_topic, std::uint64_t seed,
                    std::size_t initial_batch_size, double validation_fraction = 0.15);

inline FoldSplit make_fold(const Dataset& dataset, int holdout_topic, std::uint64_t seed,
                           std::size_t initial_batch_size, double validation_fraction = 0.15) {
    return make_fold(PairIndex::from(dataset), holdout_topic, seed, initial_batch_size,
                     validation_fraction);
}

}  // namespace alh
