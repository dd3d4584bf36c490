#include "alh/controller.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "alh/errors.hpp"
#include "alh/rng.hpp"

namespace alh {

namespace {

std::uint64_t round_seed(const FoldSplit& fold, std::size_t round, std::string_view purpose) {
    std::uint64_t s = mix_seed(fold.seed, static_cast<std::uint64_t>(fold.holdout_topic));
    s = mix_seed(s, fnv1a64(purpose));
    return mix_seed(s, static_cast<std::uint64_t>(round));
}

// Sorted set difference: pool ids minus acquired ids.
std::vector<std::string> remove_ids(const std::vector<std::string>& pool,
                                    const std::vector<std::string>& taken) {
    std::vector<std::string> rest;
    rest.reserve(pool.size() - taken.size());
    std::set_difference(pool.begin(), pool.end(), taken.begin(), taken.end(),
                        std::back_inserter(rest));
    return rest;
}

}  // namespace

std::string to_string(RetrainMode mode) {
    return mode == RetrainMode::Fresh ? "fresh" : "incremental";
}

RetrainMode retrain_mode_from_string(const std::string& name) {
    if (name == "fresh") return RetrainMode::Fresh;
    if (name == "incremental") return RetrainMode::Incremental;
    throw ConfigError("unknown retrain mode '" + name + "' (expected fresh or incremental)");
}

void ExperimentConfig::validate() const {
    if (fold_topics.empty()) throw ConfigError("no fold topics configured");
    if (seeds.empty()) throw ConfigError("no seeds configured");
    if (heuristics.empty()) throw ConfigError("no heuristics configured");
    if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
    if (max_rounds == 0) throw ConfigError("max_rounds must be >= 1");
    if (passes == 0) throw ConfigError("passes must be >= 1");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
        throw ConfigError("validation_fraction must lie in (0,1)");
    train.validate();
}

RunResult run_single(const PairTable& table, const FoldSplit& fold, Heuristic heuristic,
                     const ExperimentConfig& config) {
    config.validate();
    const LabeledSet validation_set = LabeledSet::from_ids(table, fold.validation_ids);
    const LabeledSet holdout_set =
        LabeledSet::from_ids(table, table.ids_of_topic(fold.holdout_topic));

    std::vector<std::string> labeled = fold.initial_batch_ids;  // sorted
    std::vector<std::string> pool = remove_ids(fold.train_ids, labeled);

    RunResult run;
    run.fold_topic = fold.holdout_topic;
    run.seed = fold.seed;
    run.heuristic = heuristic;

    MlpModel previous;
    std::vector<std::string> just_acquired;
    for (std::size_t round = 0;; ++round) {
        const auto started = std::chrono::steady_clock::now();
        TrainConfig round_train = config.train;
        round_train.seed = round_seed(fold, round, "train");
        const LabeledSet labeled_set = LabeledSet::from_ids(table, labeled);
        const MlpModel* warm =
            (config.retrain == RetrainMode::Incremental && round > 0) ? &previous : nullptr;
        TrainResult trained;
        try {
            trained = train(labeled_set, validation_set, round_train, warm);
        } catch (const Error& e) {
            throw TrainError("round " + std::to_string(round) + ", fold " +
                             std::to_string(fold.holdout_topic) + ", seed " +
                             std::to_string(fold.seed) + ": " + e.what());
        }
        previous = trained.model;

        RoundRecord rec;
        rec.round_index = round;
        rec.labeled_count = labeled.size();
        rec.holdout_accuracy = evaluate_accuracy(trained.model, holdout_set);
        rec.validation_accuracy = evaluate_accuracy(trained.model, validation_set);
        rec.acquired_ids = std::move(just_acquired);
        just_acquired.clear();
        rec.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        run.curve.push_back(std::move(rec));

        if (round == config.max_rounds || pool.empty()) break;

        std::vector<std::string> batch;
        if (heuristic == Heuristic::Random) {
            batch = select_batch_random(pool, config.batch_size,
                                        round_seed(fold, round, "acquire"));
        } else {
            batch = select_batch(score_pool(trained.model, table, pool, heuristic, config.passes,
                                            round_seed(fold, round, "acquire")),
                                 config.batch_size);
        }
        std::vector<std::string> merged;
        merged.reserve(labeled.size() + batch.size());
        std::merge(labeled.begin(), labeled.end(), batch.begin(), batch.end(),
                   std::back_inserter(merged));
        labeled = std::move(merged);
        pool = remove_ids(pool, batch);
        just_acquired = std::move(batch);
    }
    return run;
}

ExperimentResult run_experiment(const PairTable& table, const ExperimentConfig& config,
                                std::size_t workers) {
    config.validate();
    struct Task {
        FoldSplit fold;
        Heuristic heuristic;
    };
    std::vector<Task> tasks;
    const PairIndex index = table.index();
    for (int topic : config.fold_topics)
        for (std::uint64_t seed : config.seeds) {
            // One split per (fold, seed), shared across heuristics.
            FoldSplit fold = make_fold(index, topic, seed, config.batch_size,
                                       config.validation_fraction);
            for (Heuristic h : config.heuristics) tasks.push_back({fold, h});
        }

    std::vector<RunResult> slots(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                slots[i] = run_single(table, tasks[i].fold, tasks[i].heuristic, config);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        const std::size_t n = std::min(workers, tasks.size());
        threads.reserve(n);
        for (std::size_t t = 0; t < n; ++t) threads.emplace_back(work);
        for (std::thread& t : threads) t.join();
    }

    ExperimentResult result;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (errors[i].empty()) {
            result.runs.push_back(std::move(slots[i]));
        } else {
            result.failures.push_back({tasks[i].fold.holdout_topic, tasks[i].fold.seed,
                                       tasks[i].heuristic, errors[i]});
        }
    }
    return result;
}

}  // namespace alh
