#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "alh/corpus.hpp"
#include "alh/features.hpp"

namespace alh {

// A dataset after feature extraction: one row per pair, addressable by id.
// Immutable once built; every stage of a run reads from the same table.
struct PairTable {
    std::vector<std::string> ids;
    std::vector<int> topics;
    std::vector<int> labels;
    std::vector<FeatureVector> features;
    std::unordered_map<std::string, std::size_t> row_of;
    std::size_t feature_dim = 0;

    static PairTable featurize(const Dataset& dataset, const FeatureConfig& config);

    // Direct construction for feature-level experiments (no text involved).
    static PairTable from_rows(std::vector<std::string> ids, std::vector<int> topics,
                               std::vector<int> labels, std::vector<FeatureVector> features);

    std::size_t size() const { return ids.size(); }
    std::size_t row(const std::string& id) const;
    PairIndex index() const;
    std::vector<std::string> ids_of_topic(int topic) const;  // sorted
};

// A labeled subset of a PairTable, in sorted-id order. Houses the training
// set the per-pass probabilities are conditioned on.
struct LabeledSet {
    const PairTable* table = nullptr;
    std::vector<std::size_t> rows;
    std::array<std::size_t, 2> class_counts = {0, 0};

    // `ids` must be sorted and free of duplicates.
    static LabeledSet from_ids(const PairTable& table, std::span<const std::string> ids);

    std::size_t size() const { return rows.size(); }
    const FeatureVector& features(std::size_t i) const { return table->features[rows[i]]; }
    int label(std::size_t i) const { return table->labels[rows[i]]; }
    const std::string& id(std::size_t i) const { return table->ids[rows[i]]; }
};

}  // namespace alh
