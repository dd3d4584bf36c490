// alharness: pool-based active-learning experiments on pairwise
// argument-strength data. Subcommands: ingest, run, report, selftest.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "alh/acquisition.hpp"
#include "alh/classifier.hpp"
#include "alh/config.hpp"
#include "alh/controller.hpp"
#include "alh/corpus.hpp"
#include "alh/errors.hpp"
#include "alh/report.hpp"
#include "alh/rng.hpp"
#include "alh/stats.hpp"
#include "alh/synthetic.hpp"

namespace fs = std::filesystem;
using namespace alh;

namespace {

constexpr const char* kVersion = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRun = 3;

std::uint64_t file_fingerprint(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return fnv1a64(buffer.str());
}

void print_census(const Dataset& ds, std::ostream& out) {
    out << "topic\tname\tpairs\n";
    for (const auto& [id, info] : ds.topics)
        out << id << '\t' << info.name << '\t' << info.pair_count << '\n';
    out << "total\t" << ds.topics.size() << " topics\t" << ds.pairs.size() << " pairs\n";
}

// ---------------------------------------------------------------- ingest --

int cmd_ingest(const std::string& input, const std::string& preset, const std::string& out_path,
               bool merge) {
    Dataset ds = load_tsv(input, ColumnMapping::preset(preset));
    if (merge) ds = merge_stances(ds);
    save_canonical_tsv(ds, out_path);
    print_census(ds, std::cout);
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------- run --

struct RunContext {
    RunConfig config;
    std::vector<int> topics;
    PairTable table;
    fs::path out_dir;
    fs::path runs_dir;
    std::size_t workers = 1;
    bool resume = false;
};

std::size_t resolve_workers(std::optional<std::size_t> flag_value) {
    if (flag_value) return std::max<std::size_t>(1, *flag_value);
    if (const char* env = std::getenv("ALH_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
        throw ConfigError("ALH_WORKERS must be a positive integer, got '" + std::string(env) +
                          "'");
    }
    return 1;
}

Dataset load_run_dataset(const std::string& path) {
    Dataset ds = load_tsv(path, ColumnMapping::preset("canonical"));
    return merge_stances(ds);
}

std::vector<int> resolve_topics(const RunConfig& cfg, const Dataset& ds) {
    if (!cfg.topics.empty()) {
        for (int t : cfg.topics)
            if (!ds.topics.count(t))
                throw DataError("configured fold topic " + std::to_string(t) +
                                " is not in the dataset");
        return cfg.topics;
    }
    auto [smallest, median, largest] = select_representative_topics(ds);
    return {smallest, median, largest};
}

int run_all(RunContext& ctx) {
    const ExperimentConfig experiment = ctx.config.experiment(ctx.topics);
    experiment.validate();

    struct Task {
        FoldSplit fold;
        Heuristic heuristic;
        bool skipped = false;
    };
    std::vector<Task> tasks;
    const PairIndex index = ctx.table.index();
    for (int topic : experiment.fold_topics)
        for (std::uint64_t seed : experiment.seeds) {
            FoldSplit fold = make_fold(index, topic, seed, experiment.batch_size,
                                       experiment.validation_fraction);
            for (Heuristic h : experiment.heuristics) tasks.push_back({fold, h, false});
        }

    std::size_t skipped = 0;
    if (ctx.resume) {
        for (Task& t : tasks) {
            const fs::path f =
                ctx.runs_dir / run_file_name(t.fold.holdout_topic, t.fold.seed, t.heuristic);
            if (!fs::exists(f)) continue;
            try {
                read_run_csv(f);  // complete and well-formed
                t.skipped = true;
                ++skipped;
            } catch (const Error&) {
                // Partial or damaged file: recompute.
            }
        }
    }
    std::cout << "runs: " << tasks.size() << " (" << skipped << " already complete), workers: "
              << ctx.workers << "\n";

    std::atomic<std::size_t> next{0};
    std::mutex io_mutex;
    std::vector<RunFailure> failures;
    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            if (t.skipped) continue;
            const std::string name =
                run_file_name(t.fold.holdout_topic, t.fold.seed, t.heuristic);
            try {
                RunResult run = run_single(ctx.table, t.fold, t.heuristic, experiment);
                write_run_csv(ctx.runs_dir / name, run);
                fs::path meta = ctx.runs_dir / name;
                meta.replace_extension(".meta.json");
                write_run_meta(meta, run, to_string(experiment.retrain));
                std::lock_guard lock(io_mutex);
                std::cout << "done " << name << " (" << run.curve.size() << " rounds)\n";
            } catch (const std::exception& e) {
                std::lock_guard lock(io_mutex);
                failures.push_back({t.fold.holdout_topic, t.fold.seed, t.heuristic, e.what()});
                std::cerr << "failed " << name << ": " << e.what() << "\n";
            }
        }
    };
    if (ctx.workers <= 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < std::min(ctx.workers, tasks.size()); ++t)
            threads.emplace_back(work);
        for (std::thread& t : threads) t.join();
    }

    // Manifest: environment facts a reader of the artifact needs.
    nlohmann::json manifest;
    manifest["harness_version"] = kVersion;
    manifest["rng"] = std::string(kRngName);
    manifest["dataset"] = ctx.config.dataset_path;
    manifest["dataset_fingerprint"] = file_fingerprint(ctx.config.dataset_path);
    manifest["retrain"] = to_string(ctx.config.retrain);
    manifest["variance_convention"] = "population";
    manifest["wilcoxon_pairing"] = "fold-seed-round";
    manifest["zero_difference_rule"] = "discard";
    manifest["failures"] = nlohmann::json::array();
    for (const RunFailure& f : failures)
        manifest["failures"].push_back({{"fold_topic", f.fold_topic},
                                        {"seed", f.seed},
                                        {"heuristic", to_string(f.heuristic)},
                                        {"message", f.message}});
    write_file_atomic(ctx.out_dir / "manifest.json", manifest.dump(2) + "\n");

    // Summaries for whatever completed.
    const std::vector<RunResult> runs = read_all_runs(ctx.runs_dir);
    if (!runs.empty()) {
        Heuristic baseline = experiment.heuristics.front();
        for (Heuristic h : experiment.heuristics)
            if (h == Heuristic::Random) baseline = h;
        const std::vector<SummaryRow> rows = summarize(runs, baseline);
        write_summary_csv(ctx.out_dir / "summary.csv", rows);
        write_file_atomic(ctx.out_dir / "summary.txt", render_summary_text(rows));
        const CurveTable curves = to_curve_table(learning_curve(runs));
        write_curves_csv(ctx.out_dir / "curves.csv", curves);
        write_curves_svg(ctx.out_dir / "curves.svg", curves, "active-learning curves");
        std::cout << render_summary_text(rows);
    }
    if (!failures.empty()) {
        std::cerr << failures.size() << " run(s) failed\n";
        return kExitRun;
    }
    return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& out,
            std::optional<std::size_t> workers_flag, bool resume, bool dry_run,
            const std::string& topics_override, const std::string& seed_list_override) {
    RunContext ctx;
    ctx.config = load_config(config_path);
    if (!topics_override.empty()) {
        // Reuse the config-file syntax for the override flags.
        RunConfig patch = parse_config_text(
            "dataset = x\ntopics = " + topics_override, "--topics");
        ctx.config.topics = patch.topics;
    }
    if (!seed_list_override.empty()) {
        RunConfig patch = parse_config_text(
            "dataset = x\nseeds = " + seed_list_override, "--seed-list");
        ctx.config.seeds = patch.seeds;
    }
    ctx.workers = resolve_workers(workers_flag);
    ctx.resume = resume;

    const Dataset ds = load_run_dataset(ctx.config.dataset_path);
    ctx.topics = resolve_topics(ctx.config, ds);

    if (dry_run) {
        std::cout << "dataset: " << ctx.config.dataset_path << " (" << ds.pairs.size()
                  << " pairs, " << ds.topics.size() << " topics)\n";
        std::cout << "planned runs: "
                  << ctx.topics.size() * ctx.config.seeds.size() * ctx.config.heuristics.size()
                  << "\n";
        for (int topic : ctx.topics)
            for (std::uint64_t seed : ctx.config.seeds)
                for (Heuristic h : ctx.config.heuristics)
                    std::cout << "  fold=" << topic << " seed=" << seed << " heuristic="
                              << to_string(h) << "\n";
        return kExitOk;
    }

    ctx.config.dataset_path = fs::absolute(ctx.config.dataset_path).lexically_normal().string();
    ctx.out_dir = out;
    ctx.runs_dir = ctx.out_dir / "runs";
    fs::create_directories(ctx.runs_dir);

    const std::string snapshot = ctx.config.to_file_string(ctx.topics);
    const fs::path snapshot_path = ctx.out_dir / "config.resolved.cfg";
    if (fs::exists(snapshot_path)) {
        std::ifstream in(snapshot_path, std::ios::binary);
        std::stringstream old;
        old << in.rdbuf();
        if (old.str() != snapshot)
            throw DataError("artifact directory '" + out +
                            "' holds a different resolved config; refusing to mix experiments");
    } else {
        write_file_atomic(snapshot_path, snapshot);
    }

    ctx.table = PairTable::featurize(ds, ctx.config.features());
    return run_all(ctx);
}

// ---------------------------------------------------------------- report --

int cmd_report(const std::string& artifact_dir, const std::string& out_override,
               const std::string& baseline_name) {
    const fs::path in_dir = artifact_dir;
    const fs::path out_dir = out_override.empty() ? in_dir : fs::path(out_override);
    if (!fs::is_directory(in_dir / "runs"))
        throw DataError("'" + artifact_dir + "' has no runs/ directory");
    const std::vector<RunResult> runs = read_all_runs(in_dir / "runs");
    if (runs.empty()) throw DataError("'" + artifact_dir + "' contains no completed runs");

    const Heuristic baseline = heuristic_from_string(baseline_name);
    if (std::none_of(runs.begin(), runs.end(),
                     [&](const RunResult& r) { return r.heuristic == baseline; }))
        throw DataError("baseline heuristic '" + baseline_name + "' has no runs in '" +
                        artifact_dir + "'");

    fs::create_directories(out_dir);
    const std::vector<SummaryRow> rows = summarize(runs, baseline);
    write_summary_csv(out_dir / "summary.csv", rows);
    write_file_atomic(out_dir / "summary.txt", render_summary_text(rows));
    const CurveTable curves = to_curve_table(learning_curve(runs));
    write_curves_csv(out_dir / "curves.csv", curves);
    write_curves_svg(out_dir / "curves.svg", curves, "active-learning curves");
    std::cout << render_summary_text(rows);
    std::cout << "report written to " << out_dir.string() << "\n";
    return kExitOk;
}

// -------------------------------------------------------------- selftest --

int cmd_selftest() {
    int failed = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << "selftest: " << name << " ... " << (ok ? "ok" : "FAILED") << "\n";
        if (!ok) ++failed;
    };

    // Acquisition math against a direct evaluation of the formulas.
    {
        Rng rng(12345);
        bool ok = true;
        for (int trial = 0; trial < 500 && ok; ++trial) {
            ProbabilitySamples s;
            const std::size_t passes = 1 + rng.below(40);
            for (std::size_t t = 0; t < passes; ++t) {
                double p0 = rng.unit();
                s.rows.push_back({p0, 1.0 - p0});
            }
            std::size_t votes0 = 0;
            for (const auto& row : s.rows)
                if (row[0] >= row[1]) ++votes0;
            const double expected_vr =
                1.0 - static_cast<double>(std::max(votes0, passes - votes0)) /
                          static_cast<double>(passes);
            double m0 = 0.0;
            for (const auto& row : s.rows) m0 += row[0];
            m0 /= static_cast<double>(passes);
            auto ent = [](double p) {
                double h = 0.0;
                if (p > 0.0) h -= p * std::log2(p);
                if (1.0 - p > 0.0) h -= (1.0 - p) * std::log2(1.0 - p);
                return h;
            };
            double mean_row_ent = 0.0;
            for (const auto& row : s.rows) mean_row_ent += ent(row[0]);
            mean_row_ent /= static_cast<double>(passes);
            ok = std::abs(variation_ratio(s) - expected_vr) < 1e-12 &&
                 std::abs(predictive_entropy(s) - ent(m0)) < 1e-9 &&
                 std::abs(bald(s) - (ent(m0) - mean_row_ent)) < 1e-9 && bald(s) >= -1e-9;
        }
        check("acquisition formulas", ok);
    }

    // Wilcoxon: known exact p and the rank-sum identity.
    {
        const std::vector<double> d = {1, 2, 3, 4, 5};
        WilcoxonResult w = wilcoxon_signed_rank(d);
        bool ok = w.w_minus == 0.0 && std::abs(w.p_two_sided - 0.0625) < 1e-15;
        Rng rng(99);
        for (int trial = 0; trial < 50 && ok; ++trial) {
            std::vector<double> diffs;
            const std::size_t n = 1 + rng.below(15);
            for (std::size_t i = 0; i < n; ++i)
                diffs.push_back((rng.bernoulli(0.5) ? 1.0 : -1.0) *
                                static_cast<double>(1 + rng.below(6)));
            WilcoxonResult r = wilcoxon_signed_rank(diffs);
            const double expected_total =
                static_cast<double>(r.n_effective * (r.n_effective + 1)) / 2.0;
            ok = std::abs(r.w_plus + r.w_minus - expected_total) < 1e-9;
        }
        check("wilcoxon signed-rank", ok);
    }

    // Analytic gradients against central finite differences.
    {
        bool ok = true;
        Rng rng(7);
        for (int trial = 0; trial < 5 && ok; ++trial) {
            const std::size_t dim = 5, n = 12;
            std::vector<std::string> ids;
            std::vector<int> topics, labels;
            std::vector<FeatureVector> feats;
            for (std::size_t i = 0; i < n; ++i) {
                ids.push_back("x" + std::to_string(i));
                topics.push_back(0);
                labels.push_back(static_cast<int>(rng.below(2)));
                FeatureVector f(dim);
                for (float& v : f) v = static_cast<float>(rng.normal());
                feats.push_back(f);
            }
            PairTable table = PairTable::from_rows(ids, topics, labels, feats);
            std::vector<std::string> sorted_ids = table.ids;
            std::sort(sorted_ids.begin(), sorted_ids.end());
            LabeledSet set = LabeledSet::from_ids(table, sorted_ids);
            TrainConfig tc;
            tc.hidden_width = 4;
            tc.dropout_rate = 0.0;
            tc.seed = 1000 + static_cast<std::uint64_t>(trial);
            MlpModel m = init_model(dim, tc);
            std::vector<std::size_t> rows(n);
            for (std::size_t i = 0; i < n; ++i) rows[i] = i;
            MlpGradients g;
            g.w1.assign(m.w1.size(), 0.0);
            g.b1.assign(m.b1.size(), 0.0);
            g.w2.assign(m.w2.size(), 0.0);
            loss_and_grad(m, set, rows, {1.0, 1.0}, nullptr, &g);
            const double h = 1e-6;
            double max_err = 0.0;
            for (std::size_t k = 0; k < m.w1.size(); ++k) {
                MlpModel plus = m, minus = m;
                plus.w1[k] += h;
                minus.w1[k] -= h;
                const double numeric = (loss_and_grad(plus, set, rows, {1.0, 1.0}, nullptr,
                                                      nullptr) -
                                        loss_and_grad(minus, set, rows, {1.0, 1.0}, nullptr,
                                                      nullptr)) /
                                       (2 * h);
                max_err = std::max(max_err, std::abs(numeric - g.w1[k]));
            }
            ok = max_err < 1e-5;
        }
        check("classifier gradients", ok);
    }

    // Fold splits: determinism and disjointness.
    {
        SyntheticTextSpec spec;
        spec.topic_sizes = {60, 70, 80};
        Dataset ds = make_synthetic_pairs(spec);
        FoldSplit a = make_fold(ds, 0, 7, 20);
        FoldSplit b = make_fold(ds, 0, 7, 20);
        bool ok = a.train_ids == b.train_ids && a.validation_ids == b.validation_ids &&
                  a.initial_batch_ids == b.initial_batch_ids;
        std::vector<std::string> overlap;
        std::set_intersection(a.train_ids.begin(), a.train_ids.end(), a.validation_ids.begin(),
                              a.validation_ids.end(), std::back_inserter(overlap));
        ok = ok && overlap.empty();
        check("fold splits", ok);
    }

    return failed == 0 ? kExitOk : kExitRun;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"active-learning experiments for pairwise argument strength"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "convert a raw TSV to the canonical layout");
    std::string in_path, preset = "canonical", out_path;
    bool no_merge = false;
    ingest->add_option("input", in_path, "input TSV file")->required();
    ingest->add_option("--preset", preset, "column mapping: canonical, ukp, or ibm");
    ingest->add_option("--out", out_path, "canonical TSV to write")->required();
    ingest->add_flag("--no-merge", no_merge, "skip stance-group merging");

    // run
    auto* run = app.add_subcommand("run", "execute the acquisition protocol");
    std::string config_path, run_out, topics_override, seed_list_override;
    std::optional<std::size_t> workers_flag;
    bool resume = false, dry_run = false;
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--out", run_out, "artifact directory")->required();
    run->add_option("--workers", workers_flag, "parallel runs (default: $ALH_WORKERS or 1)");
    run->add_flag("--resume", resume, "skip runs already present in the artifact directory");
    run->add_flag("--dry-run", dry_run, "print the planned run matrix and exit");
    run->add_option("--topics", topics_override, "override fold topics (comma list)");
    run->add_option("--seed-list", seed_list_override, "override seeds (comma list or a..b)");

    // report
    auto* report = app.add_subcommand("report", "summarize a finished artifact directory");
    std::string artifact_dir, report_out, baseline_name = "random";
    report->add_option("artifact", artifact_dir, "artifact directory from 'run'")->required();
    report->add_option("--out", report_out, "output directory (default: artifact dir)");
    report->add_option("--baseline", baseline_name, "baseline heuristic (default: random)");

    // selftest
    app.add_subcommand("selftest", "run built-in numerical checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(in_path, preset, out_path, !no_merge);
        if (run->parsed())
            return cmd_run(config_path, run_out, workers_flag, resume, dry_run, topics_override,
                           seed_list_override);
        if (report->parsed()) return cmd_report(artifact_dir, report_out, baseline_name);
        return cmd_selftest();
    } catch (const TrainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRun;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRun;
    }
}
