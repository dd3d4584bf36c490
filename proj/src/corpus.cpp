#include "alh/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "alh/errors.hpp"
#include "alh/rng.hpp"

namespace alh {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r')
        cells.back().pop_back();
    return cells;
}

bool parse_nonneg_int(const std::string& s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && out >= 0;
}

}  // namespace

void Dataset::validate() const {
    std::unordered_set<std::string> seen;
    std::map<int, std::size_t> counts;
    for (const ArgumentPair& p : pairs) {
        if (p.pair_id.empty()) throw DataError("empty pair_id");
        if (!seen.insert(p.pair_id).second) throw DataError("duplicate pair_id '" + p.pair_id + "'");
        if (p.text_a.empty() || p.text_b.empty())
            throw DataError("pair '" + p.pair_id + "' has an empty argument text");
        if (p.label != 0 && p.label != 1)
            throw DataError("pair '" + p.pair_id + "' has label outside {0,1}");
        if (!topics.count(p.topic_id))
            throw DataError("pair '" + p.pair_id + "' references unknown topic " +
                            std::to_string(p.topic_id));
        counts[p.topic_id]++;
    }
    for (const auto& [id, info] : topics) {
        auto it = counts.find(id);
        std::size_t actual = it == counts.end() ? 0 : it->second;
        if (info.pair_count != actual)
            throw DataError("topic " + std::to_string(id) + " census says " +
                            std::to_string(info.pair_count) + " pairs, found " +
                            std::to_string(actual));
    }
}

void Dataset::rebuild_topic_counts() {
    for (auto& [id, info] : topics) info.pair_count = 0;
    for (const ArgumentPair& p : pairs) topics[p.topic_id].pair_count++;
}

ColumnMapping ColumnMapping::preset(const std::string& name) {
    ColumnMapping m;
    if (name == "canonical") {
        m = {"id", "topic", "stance", "label", "text_a", "text_b", LabelEncoding::Numeric};
    } else if (name == "ukp") {
        // UKP-style exports label the sides a1/a2 and carry the stance group
        // in the topic column itself.
        m = {"#id", "topic", "topic", "label", "a1", "a2", LabelEncoding::A1A2};
    } else if (name == "ibm") {
        m = {"pair_id", "topic_id", std::nullopt, "label", "argument1", "argument2",
             LabelEncoding::Numeric};
    } else {
        throw ConfigError("unknown column-mapping preset '" + name + "'");
    }
    return m;
}

Dataset load_tsv(const std::string& path, const ColumnMapping& mapping) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path + "' is empty");
    std::vector<std::string> header = split_tabs(line);
    std::unordered_map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;

    auto require = [&](const std::string& name) {
        auto it = col.find(name);
        if (it == col.end()) throw DataError("missing column '" + name + "' in '" + path + "'", 1);
        return it->second;
    };
    const std::size_t id_col = require(mapping.id_column);
    const std::size_t topic_col = require(mapping.topic_column);
    const std::size_t label_col = require(mapping.label_column);
    const std::size_t a_col = require(mapping.text_a_column);
    const std::size_t b_col = require(mapping.text_b_column);
    std::optional<std::size_t> stance_col;
    if (mapping.stance_column) stance_col = require(*mapping.stance_column);

    Dataset ds;
    std::unordered_map<std::string, int> name_to_topic;
    std::unordered_set<std::string> seen_ids;
    std::size_t line_number = 1;

    // Topic ids: numeric cells map through directly, everything else is
    // numbered by first appearance.
    auto topic_id_for = [&](const std::string& cell) {
        int numeric;
        if (parse_nonneg_int(cell, numeric)) {
            if (!ds.topics.count(numeric)) ds.topics[numeric] = {cell, 0};
            return numeric;
        }
        auto it = name_to_topic.find(cell);
        if (it != name_to_topic.end()) return it->second;
        int id = static_cast<int>(name_to_topic.size());
        while (ds.topics.count(id)) ++id;
        name_to_topic[cell] = id;
        ds.topics[id] = {cell, 0};
        return id;
    };

    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> cells = split_tabs(line);
        std::size_t needed = std::max({id_col, topic_col, label_col, a_col, b_col,
                                       stance_col.value_or(0)});
        if (cells.size() <= needed)
            throw DataError("row has " + std::to_string(cells.size()) + " cells, expected >= " +
                                std::to_string(needed + 1),
                            line_number);

        ArgumentPair p;
        p.pair_id = cells[id_col];
        if (p.pair_id.empty()) throw DataError("empty id", line_number);
        if (!seen_ids.insert(p.pair_id).second)
            throw DataError("duplicate pair_id '" + p.pair_id + "'", line_number);

        p.topic_id = topic_id_for(cells[topic_col]);
        if (stance_col && !cells[*stance_col].empty()) p.stance_tag = cells[*stance_col];

        const std::string& lab = cells[label_col];
        if (mapping.label_encoding == ColumnMapping::LabelEncoding::A1A2) {
            if (lab == "a1") p.label = 0;
            else if (lab == "a2") p.label = 1;
            else throw DataError("label '" + lab + "' not in {a1,a2}", line_number);
        } else {
            if (lab == "0") p.label = 0;
            else if (lab == "1") p.label = 1;
            else throw DataError("label '" + lab + "' not in {0,1}", line_number);
        }

        p.text_a = cells[a_col];
        p.text_b = cells[b_col];
        if (p.text_a.empty() || p.text_b.empty())
            throw DataError("empty argument text", line_number);

        ds.topics[p.topic_id].pair_count++;
        ds.pairs.push_back(std::move(p));
    }
    ds.validate();
    return ds;
}

void save_canonical_tsv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "id\ttopic\tstance\tlabel\ttext_a\ttext_b\n";
    for (const ArgumentPair& p : dataset.pairs) {
        for (const std::string* text : {&p.pair_id, &p.text_a, &p.text_b})
            if (text->find_first_of("\t\n\r") != std::string::npos)
                throw DataError("pair '" + p.pair_id + "' contains tab or newline characters");
        out << p.pair_id << '\t' << dataset.topics.at(p.topic_id).name << '\t'
            << p.stance_tag.value_or("") << '\t' << p.label << '\t' << p.text_a << '\t'
            << p.text_b << '\n';
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

Dataset merge_stances(const Dataset& raw, char separator) {
    const bool any_tagged =
        std::any_of(raw.pairs.begin(), raw.pairs.end(),
                    [](const ArgumentPair& p) { return p.stance_tag.has_value(); });
    if (!any_tagged) return raw;

    auto group_key = [&](const ArgumentPair& p) -> std::string {
        if (!p.stance_tag) return raw.topics.at(p.topic_id).name;
        const std::string& tag = *p.stance_tag;
        std::size_t sep = tag.rfind(separator);
        if (sep == std::string::npos || sep == 0 || sep + 1 == tag.size())
            throw DataError("stance tag '" + tag + "' does not match '<topic>" +
                            std::string(1, separator) + "<stance>'");
        return tag.substr(0, sep);
    };

    Dataset merged;
    merged.pairs.reserve(raw.pairs.size());
    std::unordered_map<std::string, int> key_to_topic;
    for (const ArgumentPair& p : raw.pairs) {
        std::string key = group_key(p);
        auto [it, inserted] = key_to_topic.try_emplace(key, static_cast<int>(key_to_topic.size()));
        if (inserted) merged.topics[it->second] = {key, 0};
        ArgumentPair q = p;
        q.topic_id = it->second;
        merged.topics[it->second].pair_count++;
        merged.pairs.push_back(std::move(q));
    }
    merged.validate();
    return merged;
}

std::tuple<int, int, int> select_representative_topics(const Dataset& dataset) {
    if (dataset.topics.size() < 3)
        throw DataError("need at least 3 topics, have " + std::to_string(dataset.topics.size()));
    std::vector<std::pair<std::size_t, int>> by_size;  // (count, id)
    for (const auto& [id, info] : dataset.topics) by_size.emplace_back(info.pair_count, id);
    std::sort(by_size.begin(), by_size.end());

    const int smallest = by_size.front().second;
    const int median = by_size[(by_size.size() - 1) / 2].second;
    // Largest size, lower id on ties.
    std::size_t max_size = by_size.back().first;
    int largest = by_size.back().second;
    for (const auto& [count, id] : by_size)
        if (count == max_size && id < largest) largest = id;
    return {smallest, median, largest};
}

PairIndex PairIndex::from(const Dataset& dataset) {
    PairIndex index;
    index.entries.reserve(dataset.pairs.size());
    for (const ArgumentPair& p : dataset.pairs) index.entries.emplace_back(p.pair_id, p.topic_id);
    return index;
}

std::vector<int> PairIndex::topic_ids() const {
    std::set<int> ids;
    for (const auto& [pair_id, topic] : entries) ids.insert(topic);
    return {ids.begin(), ids.end()};
}

FoldSplit make_fold(const PairIndex& index, int holdout_topic, std::uint64_t seed,
                    std::size_t initial_batch_size, double validation_fraction) {
    bool holdout_exists = false;
    std::vector<std::string> traindev;
    for (const auto& [pair_id, topic] : index.entries) {
        if (topic == holdout_topic) holdout_exists = true;
        else traindev.push_back(pair_id);
    }
    if (!holdout_exists)
        throw DataError("holdout topic " + std::to_string(holdout_topic) + " not in dataset");
    if (traindev.size() < initial_batch_size + 1)
        throw DataError("train-dev pool of " + std::to_string(traindev.size()) +
                        " pairs is too small for an initial batch of " +
                        std::to_string(initial_batch_size));

    // Canonical order first so the split depends only on the id set.
    std::sort(traindev.begin(), traindev.end());
    Rng rng(mix_seed(mix_seed(seed, fnv1a64("fold-split")),
                     static_cast<std::uint64_t>(holdout_topic)));
    rng.shuffle(traindev);

    const std::size_t n_validation = static_cast<std::size_t>(
        std::max(0.0, validation_fraction * static_cast<double>(traindev.size()) + 0.5));

    FoldSplit fold;
    fold.holdout_topic = holdout_topic;
    fold.seed = seed;
    fold.validation_ids.assign(traindev.begin(), traindev.begin() + n_validation);
    fold.train_ids.assign(traindev.begin() + n_validation, traindev.end());
    if (fold.train_ids.size() < initial_batch_size)
        throw DataError("train split smaller than the initial batch");
    // traindev is already shuffled; the first ids of the train portion are a
    // uniform draw, so the initial batch comes straight off the front.
    fold.initial_batch_ids.assign(fold.train_ids.begin(),
                                  fold.train_ids.begin() + initial_batch_size);

    std::sort(fold.validation_ids.begin(), fold.validation_ids.end());
    std::sort(fold.train_ids.begin(), fold.train_ids.end());
    std::sort(fold.initial_batch_ids.begin(), fold.initial_batch_ids.end());
    return fold;
}

}  // namespace alh
