#include "alh/data.hpp"

#include <algorithm>

#include "alh/errors.hpp"

namespace alh {

PairTable PairTable::featurize(const Dataset& dataset, const FeatureConfig& config) {
    config.validate();
    PairTable t;
    t.feature_dim = 3 * config.dimension;
    t.ids.reserve(dataset.pairs.size());
    for (const ArgumentPair& p : dataset.pairs) {
        t.row_of[p.pair_id] = t.ids.size();
        t.ids.push_back(p.pair_id);
        t.topics.push_back(p.topic_id);
        t.labels.push_back(p.label);
        t.features.push_back(featurize_pair(p.text_a, p.text_b, config));
    }
    return t;
}

PairTable PairTable::from_rows(std::vector<std::string> ids, std::vector<int> topics,
                               std::vector<int> labels, std::vector<FeatureVector> features) {
    if (ids.size() != topics.size() || ids.size() != labels.size() ||
        ids.size() != features.size())
        throw DataError("PairTable::from_rows: column lengths differ");
    PairTable t;
    t.ids = std::move(ids);
    t.topics = std::move(topics);
    t.labels = std::move(labels);
    t.features = std::move(features);
    t.feature_dim = t.features.empty() ? 0 : t.features.front().size();
    for (std::size_t i = 0; i < t.ids.size(); ++i) {
        if (t.features[i].size() != t.feature_dim)
            throw DataError("PairTable::from_rows: ragged feature rows");
        if (!t.row_of.emplace(t.ids[i], i).second)
            throw DataError("PairTable::from_rows: duplicate id '" + t.ids[i] + "'");
    }
    return t;
}

std::size_t PairTable::row(const std::string& id) const {
    auto it = row_of.find(id);
    if (it == row_of.end()) throw DataError("unknown pair id '" + id + "'");
    return it->second;
}

PairIndex PairTable::index() const {
    PairIndex ix;
    ix.entries.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ix.entries.emplace_back(ids[i], topics[i]);
    return ix;
}

std::vector<std::string> PairTable::ids_of_topic(int topic) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (topics[i] == topic) out.push_back(ids[i]);
    std::sort(out.begin(), out.end());
    return out;
}

LabeledSet LabeledSet::from_ids(const PairTable& table, std::span<const std::string> ids) {
    LabeledSet s;
    s.table = &table;
    s.rows.reserve(ids.size());
    for (const std::string& id : ids) {
        std::size_t r = table.row(id);
        s.rows.push_back(r);
        s.class_counts[static_cast<std::size_t>(table.labels[r])]++;
    }
    return s;
}

}  // namespace alh
