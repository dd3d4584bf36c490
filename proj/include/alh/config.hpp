#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alh/controller.hpp"
#include "alh/features.hpp"

namespace alh {

// Experiment configuration as read from a flat "key = value" file. Every key
// has a default drawn from the reference protocol (batch 130, 20 passes, 27
// rounds, seeds 0..9, dropout 0.1, patience 3, minibatch 64, half-epoch
// validation). `topics` empty means "pick smallest/median/largest by size".
struct RunConfig {
    std::string dataset_path;
    std::vector<int> topics;  // empty = auto-select representative topics
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<Heuristic> heuristics = {Heuristic::Random, Heuristic::VariationRatios,
                                         Heuristic::Entropy, Heuristic::Bald};
    std::size_t batch_size = 130;
    std::size_t max_rounds = 27;
    std::size_t passes = 20;
    double validation_fraction = 0.15;
    RetrainMode retrain = RetrainMode::Fresh;
    double learning_rate = 0.05;
    std::size_t minibatch = 64;
    std::size_t max_epochs = 30;
    std::size_t patience = 3;
    double validation_cadence = 0.5;
    std::optional<std::array<double, 2>> class_weights;  // nullopt = auto
    std::size_t hidden_width = 64;
    double dropout = 0.1;
    std::size_t feature_dimension = 4096;
    std::vector<int> ngram_orders = {1, 2};
    std::uint64_t hash_seed = 0;

    // The controller- and feature-level views.
    ExperimentConfig experiment(std::vector<int> resolved_topics) const;
    FeatureConfig features() const;

    // Fully explicit snapshot; parsing it back reproduces this config.
    std::string to_file_string(const std::vector<int>& resolved_topics) const;
};

RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig load_config(const std::string& path);

}  // namespace alh
