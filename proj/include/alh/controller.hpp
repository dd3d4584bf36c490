#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alh/acquisition.hpp"
#include "alh/classifier.hpp"
#include "alh/corpus.hpp"
#include "alh/data.hpp"

namespace alh {

enum class RetrainMode { Fresh, Incremental };

std::string to_string(RetrainMode mode);
RetrainMode retrain_mode_from_string(const std::string& name);

// Resolved experiment parameters: the cross product fold_topics x seeds x
// heuristics defines the runs.
struct ExperimentConfig {
    std::vector<int> fold_topics;
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<Heuristic> heuristics = {Heuristic::Random, Heuristic::VariationRatios,
                                         Heuristic::Entropy, Heuristic::Bald};
    std::size_t batch_size = 130;
    std::size_t max_rounds = 27;  // acquisition rounds after the initial batch
    std::size_t passes = 20;
    double validation_fraction = 0.15;
    RetrainMode retrain = RetrainMode::Fresh;
    TrainConfig train;

    void validate() const;
};

// One learning-curve point. Round 0 is the model trained on the initial
// batch alone; wall_seconds is informational and excluded from replay
// comparisons.
struct RoundRecord {
    std::size_t round_index = 0;
    std::size_t labeled_count = 0;
    double holdout_accuracy = 0.0;
    double validation_accuracy = 0.0;
    double wall_seconds = 0.0;
    std::vector<std::string> acquired_ids;  // ids added to reach this round (empty at round 0)
};

struct RunResult {
    int fold_topic = 0;
    std::uint64_t seed = 0;
    Heuristic heuristic = Heuristic::Random;
    std::vector<RoundRecord> curve;
};

struct RunFailure {
    int fold_topic = 0;
    std::uint64_t seed = 0;
    Heuristic heuristic = Heuristic::Random;
    std::string message;
};

struct ExperimentResult {
    std::vector<RunResult> runs;       // canonical (fold, seed, heuristic) order
    std::vector<RunFailure> failures;  // completed runs are kept even when others fail
};

// One (fold, seed, heuristic) run: train on the initial batch, then per round
// score the remaining pool, acquire batch_size ids, retrain, re-evaluate.
// All randomness derives from (fold.seed, fold.holdout_topic, round), never
// from the heuristic, which keeps round 0 identical across heuristics.
RunResult run_single(const PairTable& table, const FoldSplit& fold, Heuristic heuristic,
                     const ExperimentConfig& config);

// The full cross product. `workers` > 1 runs independent (fold, seed,
// heuristic) units on a thread pool; results are identical to serial
// execution. Per-run failures are collected, not rethrown.
ExperimentResult run_experiment(const PairTable& table, const ExperimentConfig& config,
                                std::size_t workers = 1);

}  // namespace alh
