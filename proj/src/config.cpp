#include "alh/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "alh/errors.hpp"
#include "alh/report.hpp"

namespace alh {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        part = trim(part);
        if (!part.empty()) parts.push_back(part);
    }
    return parts;
}

template <typename T>
T parse_int(const std::string& s, const std::string& key) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ConfigError("bad integer '" + s + "' for key '" + key + "'");
    return v;
}

double parse_real(const std::string& s, const std::string& key) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ConfigError("bad number '" + s + "' for key '" + key + "'");
    return v;
}

// Seed lists accept "0..9" ranges and comma lists.
std::vector<std::uint64_t> parse_seed_list(const std::string& s, const std::string& key) {
    const std::size_t dots = s.find("..");
    if (dots != std::string::npos) {
        const std::uint64_t lo = parse_int<std::uint64_t>(trim(s.substr(0, dots)), key);
        const std::uint64_t hi = parse_int<std::uint64_t>(trim(s.substr(dots + 2)), key);
        if (hi < lo) throw ConfigError("empty seed range '" + s + "'");
        std::vector<std::uint64_t> seeds;
        for (std::uint64_t v = lo; v <= hi; ++v) seeds.push_back(v);
        return seeds;
    }
    std::vector<std::uint64_t> seeds;
    for (const std::string& part : split_list(s)) seeds.push_back(parse_int<std::uint64_t>(part, key));
    if (seeds.empty()) throw ConfigError("empty seed list for key '" + key + "'");
    return seeds;
}

}  // namespace

ExperimentConfig RunConfig::experiment(std::vector<int> resolved_topics) const {
    ExperimentConfig e;
    e.fold_topics = std::move(resolved_topics);
    e.seeds = seeds;
    e.heuristics = heuristics;
    e.batch_size = batch_size;
    e.max_rounds = max_rounds;
    e.passes = passes;
    e.validation_fraction = validation_fraction;
    e.retrain = retrain;
    e.train.learning_rate = learning_rate;
    e.train.minibatch_size = minibatch;
    e.train.max_epochs = max_epochs;
    e.train.patience = patience;
    e.train.class_weights = class_weights;
    e.train.validation_cadence = validation_cadence;
    e.train.hidden_width = hidden_width;
    e.train.dropout_rate = dropout;
    return e;
}

FeatureConfig RunConfig::features() const {
    FeatureConfig f;
    f.dimension = feature_dimension;
    f.ngram_orders = ngram_orders;
    f.hash_seed = hash_seed;
    return f;
}

std::string RunConfig::to_file_string(const std::vector<int>& resolved_topics) const {
    std::ostringstream out;
    out << "# resolved experiment configuration\n";
    out << "dataset = " << dataset_path << "\n";
    out << "topics = ";
    for (std::size_t i = 0; i < resolved_topics.size(); ++i)
        out << (i ? "," : "") << resolved_topics[i];
    out << "\n";
    out << "seeds = ";
    for (std::size_t i = 0; i < seeds.size(); ++i) out << (i ? "," : "") << seeds[i];
    out << "\n";
    out << "heuristics = ";
    for (std::size_t i = 0; i < heuristics.size(); ++i)
        out << (i ? "," : "") << to_string(heuristics[i]);
    out << "\n";
    out << "batch_size = " << batch_size << "\n";
    out << "max_rounds = " << max_rounds << "\n";
    out << "passes = " << passes << "\n";
    out << "validation_fraction = " << format_full(validation_fraction) << "\n";
    out << "retrain = " << to_string(retrain) << "\n";
    out << "learning_rate = " << format_full(learning_rate) << "\n";
    out << "minibatch = " << minibatch << "\n";
    out << "max_epochs = " << max_epochs << "\n";
    out << "patience = " << patience << "\n";
    out << "validation_cadence = " << format_full(validation_cadence) << "\n";
    out << "class_weights = ";
    if (class_weights)
        out << format_full((*class_weights)[0]) << "," << format_full((*class_weights)[1]);
    else
        out << "auto";
    out << "\n";
    out << "hidden_width = " << hidden_width << "\n";
    out << "dropout = " << format_full(dropout) << "\n";
    out << "feature_dimension = " << feature_dimension << "\n";
    out << "ngram_orders = ";
    for (std::size_t i = 0; i < ngram_orders.size(); ++i) out << (i ? "," : "") << ngram_orders[i];
    out << "\n";
    out << "hash_seed = " << hash_seed << "\n";
    return out.str();
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_number) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "dataset") {
            cfg.dataset_path = value;
        } else if (key == "topics") {
            cfg.topics.clear();
            if (value != "auto")
                for (const std::string& part : split_list(value))
                    cfg.topics.push_back(parse_int<int>(part, key));
        } else if (key == "seeds") {
            cfg.seeds = parse_seed_list(value, key);
        } else if (key == "heuristics") {
            cfg.heuristics.clear();
            for (const std::string& part : split_list(value))
                cfg.heuristics.push_back(heuristic_from_string(part));
            if (cfg.heuristics.empty()) throw ConfigError("empty heuristics list");
        } else if (key == "batch_size") {
            cfg.batch_size = parse_int<std::size_t>(value, key);
        } else if (key == "max_rounds") {
            cfg.max_rounds = parse_int<std::size_t>(value, key);
        } else if (key == "passes") {
            cfg.passes = parse_int<std::size_t>(value, key);
        } else if (key == "validation_fraction") {
            cfg.validation_fraction = parse_real(value, key);
        } else if (key == "retrain") {
            cfg.retrain = retrain_mode_from_string(value);
        } else if (key == "learning_rate") {
            cfg.learning_rate = parse_real(value, key);
        } else if (key == "minibatch") {
            cfg.minibatch = parse_int<std::size_t>(value, key);
        } else if (key == "max_epochs") {
            cfg.max_epochs = parse_int<std::size_t>(value, key);
        } else if (key == "patience") {
            cfg.patience = parse_int<std::size_t>(value, key);
        } else if (key == "validation_cadence") {
            cfg.validation_cadence = parse_real(value, key);
        } else if (key == "class_weights") {
            if (value == "auto") {
                cfg.class_weights.reset();
            } else {
                const std::vector<std::string> parts = split_list(value);
                if (parts.size() != 2)
                    throw ConfigError("class_weights needs two values or 'auto'");
                cfg.class_weights = {{parse_real(parts[0], key), parse_real(parts[1], key)}};
            }
        } else if (key == "hidden_width") {
            cfg.hidden_width = parse_int<std::size_t>(value, key);
        } else if (key == "dropout") {
            cfg.dropout = parse_real(value, key);
        } else if (key == "feature_dimension") {
            cfg.feature_dimension = parse_int<std::size_t>(value, key);
        } else if (key == "ngram_orders") {
            cfg.ngram_orders.clear();
            for (const std::string& part : split_list(value))
                cfg.ngram_orders.push_back(parse_int<int>(part, key));
        } else if (key == "hash_seed") {
            cfg.hash_seed = parse_int<std::uint64_t>(value, key);
        } else {
            throw ConfigError(origin + ":" + std::to_string(line_number) + ": unknown key '" +
                              key + "'");
        }
    }
    if (cfg.dataset_path.empty()) throw ConfigError(origin + ": missing required key 'dataset'");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

}  // namespace alh
