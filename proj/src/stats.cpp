#include "alh/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "alh/errors.hpp"

namespace alh {

namespace {

// Ranks of |d| with average ranks on ties, doubled so they stay integral
// (an average of two consecutive ranks is a multiple of 1/2).
std::vector<std::int64_t> doubled_ranks(const std::vector<double>& abs_diffs) {
    const std::size_t n = abs_diffs.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return abs_diffs[a] < abs_diffs[b]; });
    std::vector<std::int64_t> ranks2(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_diffs[order[j + 1]] == abs_diffs[order[i]]) ++j;
        // Positions i..j (0-based) share ranks i+1..j+1; average doubled = (i+j+2).
        const std::int64_t avg2 = static_cast<std::int64_t>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) ranks2[order[k]] = avg2;
        i = j + 1;
    }
    return ranks2;
}

double exact_two_sided_p(const std::vector<std::int64_t>& ranks2, std::int64_t w2_plus) {
    // Subset-sum counts over doubled ranks; exactly the distribution the
    // 2^n sign enumeration produces.
    std::int64_t total2 = 0;
    for (std::int64_t r : ranks2) total2 += r;
    std::vector<std::uint64_t> ways(static_cast<std::size_t>(total2) + 1, 0);
    ways[0] = 1;
    for (std::int64_t r : ranks2)
        for (std::int64_t s = total2; s >= r; --s)
            ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - r)];
    std::uint64_t count_le = 0, count_ge = 0;
    for (std::int64_t s = 0; s <= total2; ++s) {
        if (s <= w2_plus) count_le += ways[static_cast<std::size_t>(s)];
        if (s >= w2_plus) count_ge += ways[static_cast<std::size_t>(s)];
    }
    const double assignments = std::ldexp(1.0, static_cast<int>(ranks2.size()));
    const double tail = static_cast<double>(std::min(count_le, count_ge));
    return std::min(1.0, 2.0 * tail / assignments);
}

double normal_two_sided_p(const std::vector<std::int64_t>& ranks2, double w_plus) {
    const double n = static_cast<double>(ranks2.size());
    const double mean = n * (n + 1.0) / 4.0;
    double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    // Tie correction: subtract (t^3 - t)/48 per group of tied ranks.
    std::map<std::int64_t, std::size_t> groups;
    for (std::int64_t r : ranks2) groups[r]++;
    for (const auto& [rank2, t] : groups) {
        const double td = static_cast<double>(t);
        variance -= (td * td * td - td) / 48.0;
    }
    if (w_plus == mean || variance <= 0.0) return 1.0;
    const double continuity = w_plus > mean ? -0.5 : 0.5;
    const double z = (w_plus - mean + continuity) / std::sqrt(variance);
    return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
}

}  // namespace

std::vector<double> PairedAccuracies::differences() const {
    std::vector<double> d;
    d.reserve(samples.size());
    for (const PairedSample& s : samples) d.push_back(s.challenger - s.baseline);
    return d;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences,
                                    std::size_t exact_limit) {
    std::vector<double> abs_diffs;
    std::vector<int> signs;
    for (double d : differences) {
        if (d == 0.0) continue;  // Wilcoxon's discard rule
        abs_diffs.push_back(std::abs(d));
        signs.push_back(d > 0.0 ? 1 : -1);
    }
    if (abs_diffs.empty())
        throw DataError("Wilcoxon signed-rank test is degenerate: all differences are zero");

    const std::vector<std::int64_t> ranks2 = doubled_ranks(abs_diffs);
    std::int64_t w2_plus = 0, w2_minus = 0;
    for (std::size_t i = 0; i < ranks2.size(); ++i)
        (signs[i] > 0 ? w2_plus : w2_minus) += ranks2[i];

    WilcoxonResult result;
    result.n_effective = abs_diffs.size();
    result.w_plus = static_cast<double>(w2_plus) / 2.0;
    result.w_minus = static_cast<double>(w2_minus) / 2.0;
    if (result.n_effective <= exact_limit) {
        result.method = WilcoxonResult::Method::Exact;
        result.p_two_sided = exact_two_sided_p(ranks2, w2_plus);
    } else {
        result.method = WilcoxonResult::Method::NormalApprox;
        result.p_two_sided = normal_two_sided_p(ranks2, result.w_plus);
    }
    return result;
}

double mean_of(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double population_variance(std::span<const double> values) {
    const double m = mean_of(values);
    double sum = 0.0;
    for (double v : values) sum += (v - m) * (v - m);
    return sum / static_cast<double>(values.size());
}

namespace {

using TripleKey = std::tuple<int, std::uint64_t, std::size_t>;

std::map<TripleKey, double> accuracy_by_key(std::span<const RunResult> results, Heuristic h) {
    std::map<TripleKey, double> out;
    for (const RunResult& run : results) {
        if (run.heuristic != h) continue;
        for (const RoundRecord& rec : run.curve) {
            TripleKey key{run.fold_topic, run.seed, rec.round_index};
            if (!out.emplace(key, rec.holdout_accuracy).second)
                throw DataError("duplicate run records for heuristic " + to_string(h));
        }
    }
    return out;
}

}  // namespace

PairedAccuracies pair_accuracies(std::span<const RunResult> results, Heuristic baseline,
                                 Heuristic challenger) {
    const auto base = accuracy_by_key(results, baseline);
    const auto chal = accuracy_by_key(results, challenger);
    if (base.size() != chal.size() ||
        !std::equal(base.begin(), base.end(), chal.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; }))
        throw DataError("challenger " + to_string(challenger) +
                        " does not cover the baseline's (fold, seed, round) keys");
    PairedAccuracies pairs;
    pairs.samples.reserve(base.size());
    auto bi = base.begin();
    auto ci = chal.begin();
    for (; bi != base.end(); ++bi, ++ci) {
        const auto& [fold, seed, round] = bi->first;
        pairs.samples.push_back({fold, seed, round, bi->second, ci->second});
    }
    return pairs;
}

std::vector<SummaryRow> summarize(std::span<const RunResult> results, Heuristic baseline) {
    const auto base = accuracy_by_key(results, baseline);
    if (base.empty()) throw DataError("baseline heuristic " + to_string(baseline) +
                                      " has no run records");
    std::vector<double> base_acc;
    base_acc.reserve(base.size());
    for (const auto& [key, acc] : base) base_acc.push_back(acc);

    std::vector<Heuristic> present;
    for (Heuristic h : kAllHeuristics)
        if (std::any_of(results.begin(), results.end(),
                        [h](const RunResult& r) { return r.heuristic == h; }))
            present.push_back(h);

    std::vector<SummaryRow> rows;
    // Baseline first, matching the published table layout.
    SummaryRow base_row;
    base_row.heuristic = baseline;
    base_row.is_baseline = true;
    base_row.mean = mean_of(base_acc);
    base_row.variance = population_variance(base_acc);
    base_row.n = base_acc.size();
    rows.push_back(base_row);

    for (Heuristic h : present) {
        if (h == baseline) continue;
        const PairedAccuracies pairs = pair_accuracies(results, baseline, h);
        std::vector<double> acc;
        acc.reserve(pairs.samples.size());
        for (const PairedSample& s : pairs.samples) acc.push_back(s.challenger);
        SummaryRow row;
        row.heuristic = h;
        row.mean = mean_of(acc);
        row.variance = population_variance(acc);
        row.avg_diff = row.mean - base_row.mean;
        row.n = acc.size();
        try {
            row.p_two_sided = wilcoxon_signed_rank(pairs).p_two_sided;
        } catch (const DataError&) {
            row.degenerate = true;
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<HeuristicCurve> learning_curve(std::span<const RunResult> results) {
    if (results.empty()) throw DataError("learning_curve on empty results");
    std::vector<HeuristicCurve> curves;
    for (Heuristic h : kAllHeuristics) {
        std::vector<std::vector<double>> per_round;
        for (const RunResult& run : results) {
            if (run.heuristic != h) continue;
            for (const RoundRecord& rec : run.curve) {
                if (per_round.size() <= rec.round_index) per_round.resize(rec.round_index + 1);
                per_round[rec.round_index].push_back(rec.holdout_accuracy);
            }
        }
        if (per_round.empty()) continue;
        HeuristicCurve curve;
        curve.heuristic = h;
        for (const std::vector<double>& acc : per_round) {
            CurvePoint p;
            p.count = acc.size();
            if (!acc.empty()) {
                p.mean = mean_of(acc);
                p.stddev = std::sqrt(population_variance(acc));
            }
            curve.points.push_back(p);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

}  // namespace alh
