#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "alh/controller.hpp"

namespace alh {

// Accuracies of a challenger and the baseline aligned on identical
// (fold, seed, round) keys.
struct PairedSample {
    int fold_topic = 0;
    std::uint64_t seed = 0;
    std::size_t round = 0;
    double baseline = 0.0;
    double challenger = 0.0;
};

struct PairedAccuracies {
    std::vector<PairedSample> samples;
    std::vector<double> differences() const;  // challenger - baseline
};

struct WilcoxonResult {
    double w_plus = 0.0;
    double w_minus = 0.0;
    std::size_t n_effective = 0;  // pairs left after discarding zero differences
    double p_two_sided = 1.0;
    enum class Method { Exact, NormalApprox } method = Method::Exact;
};

// Two-sided Wilcoxon signed-rank test. Zero differences are discarded, tied
// absolute differences share their average rank. n_effective <= exact_limit
// is solved exactly (the p equals full enumeration of all 2^n sign
// assignments); larger n uses the normal approximation with tie-corrected
// variance and continuity correction. Throws DataError when every difference
// is zero. exact_limit exists so tests can force either path.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences,
                                    std::size_t exact_limit = 20);

inline WilcoxonResult wilcoxon_signed_rank(const PairedAccuracies& pairs) {
    return wilcoxon_signed_rank(pairs.differences());
}

// One row of the results table. `variance` is the population variance
// (divide by N); `avg_diff` and `p_two_sided` are absent on the baseline row,
// and `p_two_sided` is also absent when the paired test is degenerate.
struct SummaryRow {
    Heuristic heuristic = Heuristic::Random;
    bool is_baseline = false;
    double mean = 0.0;
    double variance = 0.0;
    std::optional<double> avg_diff;
    std::optional<double> p_two_sided;
    bool degenerate = false;
    std::size_t n = 0;
};

// Aggregates every (fold, seed, round) holdout accuracy per heuristic and
// pairs each challenger with the baseline. Throws when the baseline is
// missing or a challenger's key set differs from the baseline's.
std::vector<SummaryRow> summarize(std::span<const RunResult> results, Heuristic baseline);

// Builds the paired accuracy list for one challenger against the baseline.
PairedAccuracies pair_accuracies(std::span<const RunResult> results, Heuristic baseline,
                                 Heuristic challenger);

struct CurvePoint {
    double mean = 0.0;
    double stddev = 0.0;   // population standard deviation
    std::size_t count = 0;  // runs contributing to this round
};

struct HeuristicCurve {
    Heuristic heuristic = Heuristic::Random;
    std::vector<CurvePoint> points;  // indexed by round
};

// Per-heuristic, per-round mean holdout accuracy over (fold, seed). Rounds
// missing from shorter runs simply contribute fewer counts.
std::vector<HeuristicCurve> learning_curve(std::span<const RunResult> results);

double mean_of(std::span<const double> values);
double population_variance(std::span<const double> values);

}  // namespace alh
