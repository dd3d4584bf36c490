#include "alh/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

#include "alh/errors.hpp"
#include "alh/rng.hpp"

namespace alh {

namespace {

constexpr char kCheckpointMagic[8] = {'A', 'L', 'H', 'M', 'L', 'P', '1', '\n'};

std::vector<std::int32_t> nonzero_indices(std::span<const float> x) {
    std::vector<std::int32_t> nz;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] != 0.0f) nz.push_back(static_cast<std::int32_t>(j));
    return nz;
}

std::array<double, 2> softmax2(double z0, double z1) {
    double m = std::max(z0, z1);
    double e0 = std::exp(z0 - m);
    double e1 = std::exp(z1 - m);
    double s = e0 + e1;
    return {e0 / s, e1 / s};
}

struct Workspace {
    std::vector<double> pre, act, dropped, dh;
    std::vector<float> scale;
};

// Forward pass for one example. `scale` is the per-hidden-unit dropout
// multiplier (empty = no dropout). Fills ws with intermediates for backprop.
std::array<double, 2> forward_one(const MlpModel& m, std::span<const float> x,
                                  std::span<const std::int32_t> nz,
                                  std::span<const float> scale, Workspace& ws) {
    const std::size_t H = m.hidden_width;
    if (H == 0) {
        double z0 = m.b2[0], z1 = m.b2[1];
        for (std::int32_t j : nz) {
            const double xv = x[j];
            z0 += xv * m.w2[2 * static_cast<std::size_t>(j)];
            z1 += xv * m.w2[2 * static_cast<std::size_t>(j) + 1];
        }
        return softmax2(z0, z1);
    }
    ws.pre.assign(m.b1.begin(), m.b1.end());
    for (std::int32_t j : nz) {
        const double xv = x[j];
        const double* w = &m.w1[static_cast<std::size_t>(j) * H];
        for (std::size_t h = 0; h < H; ++h) ws.pre[h] += xv * w[h];
    }
    ws.act.resize(H);
    ws.dropped.resize(H);
    for (std::size_t h = 0; h < H; ++h) {
        ws.act[h] = ws.pre[h] > 0.0 ? ws.pre[h] : 0.0;
        ws.dropped[h] = scale.empty() ? ws.act[h] : ws.act[h] * scale[h];
    }
    double z0 = m.b2[0], z1 = m.b2[1];
    for (std::size_t h = 0; h < H; ++h) {
        z0 += ws.dropped[h] * m.w2[2 * h];
        z1 += ws.dropped[h] * m.w2[2 * h + 1];
    }
    return softmax2(z0, z1);
}

// Accumulates gradients for one example into `g` (scaled by `inv_n`).
void backward_one(const MlpModel& m, std::span<const float> x,
                  std::span<const std::int32_t> nz, std::span<const float> scale,
                  Workspace& ws, const std::array<double, 2>& probs, int label,
                  double weight, double inv_n, MlpGradients& g) {
    const std::size_t H = m.hidden_width;
    std::array<double, 2> dz = {probs[0], probs[1]};
    dz[static_cast<std::size_t>(label)] -= 1.0;
    dz[0] *= weight * inv_n;
    dz[1] *= weight * inv_n;
    g.b2[0] += dz[0];
    g.b2[1] += dz[1];
    if (H == 0) {
        for (std::int32_t j : nz) {
            const double xv = x[j];
            g.w2[2 * static_cast<std::size_t>(j)] += xv * dz[0];
            g.w2[2 * static_cast<std::size_t>(j) + 1] += xv * dz[1];
        }
        return;
    }
    // Through the output layer and the (fixed) dropout multiplier.
    for (std::size_t h = 0; h < H; ++h) {
        g.w2[2 * h] += ws.dropped[h] * dz[0];
        g.w2[2 * h + 1] += ws.dropped[h] * dz[1];
    }
    std::vector<double>& dh = ws.dh;
    dh.resize(H);
    for (std::size_t h = 0; h < H; ++h) {
        double d = m.w2[2 * h] * dz[0] + m.w2[2 * h + 1] * dz[1];
        if (!scale.empty()) d *= scale[h];
        dh[h] = ws.pre[h] > 0.0 ? d : 0.0;  // ReLU'(0) taken as 0
    }
    for (std::size_t h = 0; h < H; ++h) g.b1[h] += dh[h];
    for (std::int32_t j : nz) {
        const double xv = x[j];
        double* w = &g.w1[static_cast<std::size_t>(j) * H];
        for (std::size_t h = 0; h < H; ++h) w[h] += xv * dh[h];
    }
}

MlpGradients zero_gradients(const MlpModel& m) {
    MlpGradients g;
    g.w1.assign(m.w1.size(), 0.0);
    g.b1.assign(m.b1.size(), 0.0);
    g.w2.assign(m.w2.size(), 0.0);
    g.b2 = {0.0, 0.0};
    return g;
}

std::array<double, 2> resolve_class_weights(const TrainConfig& cfg, const LabeledSet& train_set) {
    if (cfg.class_weights) return *cfg.class_weights;
    const double n = static_cast<double>(train_set.size());
    std::array<double, 2> w;
    for (std::size_t c = 0; c < 2; ++c) {
        if (train_set.class_counts[c] == 0)
            throw TrainError("class " + std::to_string(c) +
                             " has no training examples; inverse-frequency weights undefined");
        w[c] = n / (2.0 * static_cast<double>(train_set.class_counts[c]));
    }
    return w;
}

void draw_dropout_scale(Rng& rng, double rate, std::size_t width, std::vector<float>& scale) {
    scale.resize(width);
    const float keep_scale = static_cast<float>(1.0 / (1.0 - rate));
    for (std::size_t h = 0; h < width; ++h)
        scale[h] = rng.bernoulli(rate) ? 0.0f : keep_scale;
}

}  // namespace

std::size_t MlpModel::parameter_count() const {
    return w1.size() + b1.size() + w2.size() + b2.size();
}

bool MlpModel::all_finite() const {
    auto ok = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    return ok(w1) && ok(b1) && ok(w2) && ok(b2);
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (minibatch_size == 0) throw ConfigError("minibatch_size must be positive");
    if (max_epochs == 0) throw ConfigError("max_epochs must be positive");
    if (patience == 0) throw ConfigError("patience must be >= 1");
    if (!(validation_cadence > 0.0)) throw ConfigError("validation_cadence must be positive");
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
        throw ConfigError("dropout_rate must lie in [0,1)");
    if (class_weights && (!((*class_weights)[0] > 0.0) || !((*class_weights)[1] > 0.0)))
        throw ConfigError("class_weights must be positive");
}

MlpModel init_model(std::size_t input_dim, const TrainConfig& config) {
    MlpModel m;
    m.input_dim = input_dim;
    m.hidden_width = config.hidden_width;
    m.dropout_rate = config.dropout_rate;
    Rng rng(mix_seed(config.seed, fnv1a64("mlp-init")));
    const std::size_t H = m.hidden_width;
    if (H > 0) {
        const double s1 = std::sqrt(2.0 / static_cast<double>(input_dim));
        m.w1.resize(input_dim * H);
        for (double& w : m.w1) w = rng.normal() * s1;
        m.b1.assign(H, 0.0);
        const double s2 = std::sqrt(1.0 / static_cast<double>(H));
        m.w2.resize(H * 2);
        for (double& w : m.w2) w = rng.normal() * s2;
    } else {
        const double s2 = std::sqrt(1.0 / static_cast<double>(input_dim));
        m.w2.resize(input_dim * 2);
        for (double& w : m.w2) w = rng.normal() * s2;
    }
    m.b2 = {0.0, 0.0};
    return m;
}

double loss_and_grad(const MlpModel& model, const LabeledSet& data,
                     std::span<const std::size_t> rows,
                     const std::array<double, 2>& class_weights,
                     const std::vector<float>* dropout_scale, MlpGradients* grads) {
    if (rows.empty()) throw TrainError("loss over an empty batch");
    Workspace ws;
    std::span<const float> scale =
        dropout_scale ? std::span<const float>(*dropout_scale) : std::span<const float>();
    const double inv_n = 1.0 / static_cast<double>(rows.size());
    double loss = 0.0;
    for (std::size_t i : rows) {
        const FeatureVector& x = data.features(i);
        const std::vector<std::int32_t> nz = nonzero_indices(x);
        const int y = data.label(i);
        const std::array<double, 2> p = forward_one(model, x, nz, scale, ws);
        const double w = class_weights[static_cast<std::size_t>(y)];
        // Clamp keeps the loss finite when softmax saturates.
        loss += w * -std::log(std::max(p[static_cast<std::size_t>(y)], 1e-300)) * inv_n;
        if (grads) backward_one(model, x, nz, scale, ws, p, y, w, inv_n, *grads);
    }
    return loss;
}

TrainResult train(const LabeledSet& train_set, const LabeledSet& validation_set,
                  const TrainConfig& config, const MlpModel* warm_start) {
    config.validate();
    if (train_set.size() == 0) throw TrainError("training set is empty");
    if (validation_set.size() == 0) throw TrainError("validation set is empty");
    const std::size_t input_dim = train_set.table->feature_dim;

    TrainResult result;
    if (warm_start) {
        if (warm_start->input_dim != input_dim)
            throw TrainError("warm-start model dimension mismatch");
        result.model = *warm_start;
    } else {
        result.model = init_model(input_dim, config);
    }
    MlpModel& model = result.model;
    TrainHistory& history = result.history;
    history.class_weights = resolve_class_weights(config, train_set);

    // Cache sparsity pattern and within-set row lists once.
    std::vector<std::vector<std::int32_t>> train_nz(train_set.size());
    for (std::size_t i = 0; i < train_set.size(); ++i)
        train_nz[i] = nonzero_indices(train_set.features(i));
    std::vector<std::size_t> validation_rows(validation_set.size());
    std::iota(validation_rows.begin(), validation_rows.end(), std::size_t{0});

    const std::size_t batches_per_epoch =
        (train_set.size() + config.minibatch_size - 1) / config.minibatch_size;
    const std::size_t check_interval = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::llround(config.validation_cadence * static_cast<double>(batches_per_epoch))));

    Rng order_rng(mix_seed(config.seed, fnv1a64("mlp-shuffle")));
    Rng dropout_rng(mix_seed(config.seed, fnv1a64("mlp-dropout")));
    const bool use_dropout = config.dropout_rate > 0.0 && model.hidden_width > 0;

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    MlpModel best = model;
    double best_loss = std::numeric_limits<double>::infinity();
    std::size_t stale_checks = 0;
    std::size_t batch_counter = 0;
    bool stop = false;
    Workspace ws;
    std::vector<float> scale;
    MlpGradients grads = zero_gradients(model);

    auto run_check = [&]() {
        const double vloss = loss_and_grad(model, validation_set, validation_rows,
                                           history.class_weights, nullptr, nullptr);
        history.validation_losses.push_back(vloss);
        if (vloss < best_loss) {
            best_loss = vloss;
            best = model;
            history.best_check = history.validation_losses.size() - 1;
            stale_checks = 0;
        } else if (++stale_checks >= config.patience) {
            history.stopped_early = true;
            stop = true;
        }
    };

    for (std::size_t epoch = 0; epoch < config.max_epochs && !stop; ++epoch) {
        order_rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t epoch_examples = 0;
        for (std::size_t start = 0; start < order.size() && !stop;
             start += config.minibatch_size) {
            const std::size_t end = std::min(order.size(), start + config.minibatch_size);
            const double inv_n = 1.0 / static_cast<double>(end - start);
            std::fill(grads.w1.begin(), grads.w1.end(), 0.0);
            std::fill(grads.b1.begin(), grads.b1.end(), 0.0);
            std::fill(grads.w2.begin(), grads.w2.end(), 0.0);
            grads.b2 = {0.0, 0.0};
            double batch_loss = 0.0;
            for (std::size_t k = start; k < end; ++k) {
                const std::size_t i = order[k];
                const FeatureVector& x = train_set.features(i);
                std::span<const float> scale_span;
                if (use_dropout) {
                    draw_dropout_scale(dropout_rng, config.dropout_rate, model.hidden_width,
                                       scale);
                    scale_span = scale;
                }
                const std::array<double, 2> p =
                    forward_one(model, x, train_nz[i], scale_span, ws);
                const int y = train_set.label(i);
                const double w = history.class_weights[static_cast<std::size_t>(y)];
                batch_loss += w * -std::log(std::max(p[static_cast<std::size_t>(y)], 1e-300));
                backward_one(model, x, train_nz[i], scale_span, ws, p, y, w, inv_n, grads);
            }
            batch_loss *= inv_n;
            if (!std::isfinite(batch_loss))
                throw TrainError("non-finite training loss at epoch " + std::to_string(epoch) +
                                 ", batch " + std::to_string(start / config.minibatch_size));
            epoch_loss += batch_loss * static_cast<double>(end - start);
            epoch_examples += end - start;

            const double lr = config.learning_rate;
            for (std::size_t i = 0; i < model.w1.size(); ++i) model.w1[i] -= lr * grads.w1[i];
            for (std::size_t i = 0; i < model.b1.size(); ++i) model.b1[i] -= lr * grads.b1[i];
            for (std::size_t i = 0; i < model.w2.size(); ++i) model.w2[i] -= lr * grads.w2[i];
            model.b2[0] -= lr * grads.b2[0];
            model.b2[1] -= lr * grads.b2[1];

            if (++batch_counter % check_interval == 0) run_check();
        }
        if (epoch_examples > 0)
            history.epoch_train_losses.push_back(epoch_loss /
                                                 static_cast<double>(epoch_examples));
        history.epochs_run = epoch + 1;
    }
    if (history.validation_losses.empty()) run_check();

    history.best_validation_loss = best_loss;
    result.model = best;
    if (!result.model.all_finite()) throw TrainError("trained parameters are not finite");
    return result;
}

std::array<double, 2> ProbabilitySamples::mean() const {
    std::array<double, 2> m = {0.0, 0.0};
    for (const auto& r : rows) {
        m[0] += r[0];
        m[1] += r[1];
    }
    const double inv = 1.0 / static_cast<double>(rows.size());
    return {m[0] * inv, m[1] * inv};
}

void ProbabilitySamples::validate() const {
    if (rows.empty()) throw DataError("ProbabilitySamples needs at least one pass");
    for (const auto& r : rows) {
        if (!(r[0] >= 0.0 && r[0] <= 1.0 && r[1] >= 0.0 && r[1] <= 1.0))
            throw DataError("probability outside [0,1]");
        if (std::abs(r[0] + r[1] - 1.0) > 1e-6) throw DataError("probability row does not sum to 1");
    }
}

ProbabilitySamples mc_predict_with_seeds(const MlpModel& model, std::span<const float> x,
                                         std::span<const std::uint64_t> pass_seeds) {
    if (pass_seeds.empty()) throw DataError("mc_predict needs at least one pass");
    const std::vector<std::int32_t> nz = nonzero_indices(x);
    Workspace ws;
    std::vector<float> scale;
    ProbabilitySamples samples;
    samples.rows.reserve(pass_seeds.size());
    const bool use_dropout = model.dropout_rate > 0.0 && model.hidden_width > 0;
    for (std::uint64_t pass_seed : pass_seeds) {
        std::span<const float> scale_span;
        if (use_dropout) {
            Rng rng(pass_seed);
            draw_dropout_scale(rng, model.dropout_rate, model.hidden_width, scale);
            scale_span = scale;
        }
        samples.rows.push_back(forward_one(model, x, nz, scale_span, ws));
    }
    return samples;
}

ProbabilitySamples mc_predict(const MlpModel& model, std::span<const float> x,
                              std::size_t passes, std::uint64_t seed) {
    std::vector<std::uint64_t> pass_seeds(passes);
    for (std::size_t t = 0; t < passes; ++t)
        pass_seeds[t] = mix_seed(seed, static_cast<std::uint64_t>(t));
    return mc_predict_with_seeds(model, x, pass_seeds);
}

std::array<double, 2> predict_proba(const MlpModel& model, std::span<const float> x) {
    Workspace ws;
    return forward_one(model, x, nonzero_indices(x), {}, ws);
}

int predict_label(const MlpModel& model, std::span<const float> x) {
    const std::array<double, 2> p = predict_proba(model, x);
    return p[1] > p[0] ? 1 : 0;
}

double evaluate_accuracy(const MlpModel& model, const LabeledSet& data) {
    if (data.size() == 0) throw DataError("evaluate_accuracy on an empty set");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (predict_label(model, data.features(i)) == data.label(i)) ++correct;
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

void save_model(const MlpModel& model, const std::string& path) {
    static_assert(sizeof(double) == 8 && std::numeric_limits<double>::is_iec559);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write checkpoint '" + path + "'");
    out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
    auto put_u64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    auto put_f64 = [&](std::span<const double> v) {
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * 8));
    };
    put_u64(model.input_dim);
    put_u64(model.hidden_width);
    put_f64({&model.dropout_rate, 1});
    put_f64(model.w1);
    put_f64(model.b1);
    put_f64(model.w2);
    put_f64(model.b2);
    if (!out) throw DataError("write failed for checkpoint '" + path + "'");
}

MlpModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint '" + path + "'");
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kCheckpointMagic, 8) != 0)
        throw DataError("'" + path + "' is not a model checkpoint");
    auto get_u64 = [&]() {
        std::uint64_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    auto get_f64 = [&](std::span<double> v) {
        in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * 8));
    };
    MlpModel m;
    m.input_dim = get_u64();
    m.hidden_width = get_u64();
    get_f64({&m.dropout_rate, 1});
    m.w1.resize(m.input_dim * m.hidden_width);
    m.b1.resize(m.hidden_width);
    m.w2.resize((m.hidden_width ? m.hidden_width : m.input_dim) * 2);
    get_f64(m.w1);
    get_f64(m.b1);
    get_f64(m.w2);
    get_f64(m.b2);
    if (!in) throw DataError("checkpoint '" + path + "' is truncated");
    in.peek();
    if (!in.eof()) throw DataError("checkpoint '" + path + "' has trailing bytes");
    return m;
}

}  // namespace alh
