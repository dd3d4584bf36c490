#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alh/stats.hpp"

namespace alh {

// Canonical number formatting. Every emitted CSV uses these, which makes
// parse-then-emit a byte-identical round trip.
std::string format_fixed4(double v);   // tables: accuracies, variances, diffs
std::string format_full(double v);     // run records: shortest exact round trip
std::string format_sig6(double v);     // p-values

double parse_double(const std::string& s);

// --- per-run record files (the deterministic replay surface) ---

std::string run_file_name(int fold_topic, std::uint64_t seed, Heuristic heuristic);

// One flat CSV per run: fold_topic,seed,heuristic,round,labeled_count,
// holdout_accuracy,validation_accuracy. Timing lives in the .meta.json
// sidecar, never here.
void write_run_csv(const std::filesystem::path& path, const RunResult& run);
RunResult read_run_csv(const std::filesystem::path& path);

void write_run_meta(const std::filesystem::path& path, const RunResult& run,
                    const std::string& retrain_mode);

// Loads every run_*.csv under `runs_dir`, sorted by file name.
std::vector<RunResult> read_all_runs(const std::filesystem::path& runs_dir);

// --- summary artifacts ---

void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);
std::string render_summary_text(std::span<const SummaryRow> rows);

// Curve table: one row per round, (mean, stddev) column pair per heuristic.
// Cells are empty where a heuristic has no data for that round.
struct CurveTable {
    struct Cell {
        std::optional<double> mean, stddev;
    };
    std::vector<Heuristic> heuristics;
    std::vector<std::vector<Cell>> rows;  // [round][heuristic]
};

CurveTable to_curve_table(std::span<const HeuristicCurve> curves);
void write_curves_csv(const std::filesystem::path& path, const CurveTable& table);
CurveTable read_curves_csv(const std::filesystem::path& path);

// Self-contained SVG line chart, round index vs. mean holdout accuracy.
void write_curves_svg(const std::filesystem::path& path, const CurveTable& table,
                      const std::string& title);

// Atomic file replacement: write to a temp sibling, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace alh
