#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alh/data.hpp"

namespace alh {

// Binary classifier: input -> ReLU hidden layer (dropout lives here) ->
// 2-way softmax. hidden_width 0 degenerates to logistic regression, which
// some convexity tests rely on. Layouts: w1 is input-major [input][hidden],
// w2 is [hidden][2] (or [input][2] when hidden_width == 0).
struct MlpModel {
    std::size_t input_dim = 0;
    std::size_t hidden_width = 64;
    double dropout_rate = 0.1;
    std::vector<double> w1, b1, w2;
    std::array<double, 2> b2 = {0.0, 0.0};

    std::size_t parameter_count() const;
    bool all_finite() const;
    bool operator==(const MlpModel&) const = default;
};

struct TrainConfig {
    double learning_rate = 0.05;
    std::size_t minibatch_size = 64;
    std::size_t max_epochs = 30;
    std::size_t patience = 3;
    std::optional<std::array<double, 2>> class_weights;  // nullopt: inverse class frequency
    double validation_cadence = 0.5;                     // fraction of an epoch between checks
    std::uint64_t seed = 0;
    std::size_t hidden_width = 64;
    double dropout_rate = 0.1;

    void validate() const;
};

struct TrainHistory {
    std::vector<double> validation_losses;  // one entry per early-stopping check
    std::vector<double> epoch_train_losses;
    double best_validation_loss = 0.0;
    std::size_t best_check = 0;
    std::size_t epochs_run = 0;
    bool stopped_early = false;
    std::array<double, 2> class_weights = {1.0, 1.0};  // resolved weights
};

struct TrainResult {
    MlpModel model;
    TrainHistory history;
};

// Minimizes class-weighted cross-entropy with plain SGD over shuffled
// minibatches, checking validation loss every `validation_cadence` of an
// epoch and keeping the best checkpoint. `warm_start` continues from an
// existing model instead of a fresh seed-derived initialization.
TrainResult train(const LabeledSet& train_set, const LabeledSet& validation_set,
                  const TrainConfig& config, const MlpModel* warm_start = nullptr);

// Per-pass class probabilities from stochastic forward passes: row t is the
// softmax output under dropout mask t, the column mean is the averaged
// predictive distribution.
struct ProbabilitySamples {
    std::vector<std::array<double, 2>> rows;

    std::size_t pass_count() const { return rows.size(); }
    std::array<double, 2> mean() const;
    void validate() const;  // T >= 1, entries in [0,1], rows sum to 1 +- 1e-6
};

// T stochastic forward passes with dropout active; pass t uses the derived
// seed mix_seed(seed, t), so rows are exchangeable under seed permutation.
ProbabilitySamples mc_predict(const MlpModel& model, std::span<const float> x,
                              std::size_t passes, std::uint64_t seed);

// Same, with caller-supplied per-pass seeds.
ProbabilitySamples mc_predict_with_seeds(const MlpModel& model, std::span<const float> x,
                                         std::span<const std::uint64_t> pass_seeds);

// Deterministic dropout-free softmax output.
std::array<double, 2> predict_proba(const MlpModel& model, std::span<const float> x);

// Argmax of predict_proba; exact ties go to class 0.
int predict_label(const MlpModel& model, std::span<const float> x);

// Fraction of examples whose predicted label matches the stored one.
double evaluate_accuracy(const MlpModel& model, const LabeledSet& data);

// --- primitives exposed for numerical verification ---

struct MlpGradients {
    std::vector<double> w1, b1, w2;
    std::array<double, 2> b2 = {0.0, 0.0};
};

// Mean weighted cross-entropy over `rows` of `data`, optionally accumulating
// analytic gradients. `dropout_scale`, when given, is a fixed per-hidden-unit
// multiplier (0 or 1/(1-p)) applied to every example, which keeps the loss a
// deterministic function of the parameters for finite-difference checks.
double loss_and_grad(const MlpModel& model, const LabeledSet& data,
                     std::span<const std::size_t> rows,
                     const std::array<double, 2>& class_weights,
                     const std::vector<float>* dropout_scale, MlpGradients* grads);

// Seed-derived fresh initialization (He-scaled normal weights, zero biases).
MlpModel init_model(std::size_t input_dim, const TrainConfig& config);

// Checkpoint i/o: little-endian binary, layout documented in docs/formats.md.
// Round-trips bit-exactly.
void save_model(const MlpModel& model, const std::string& path);
MlpModel load_model(const std::string& path);

}  // namespace alh
