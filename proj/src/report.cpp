#include "alh/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "alh/errors.hpp"

namespace alh {

namespace fs = std::filesystem;

std::string format_fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string format_full(double v) {
    // Shortest decimal string that parses back to the same double.
    for (int precision = 1; precision <= 17; ++precision) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        double parsed;
        auto [p, ec] = std::from_chars(buf, buf + std::strlen(buf), parsed);
        if (ec == std::errc{} && parsed == v) return buf;
    }
    return "0";
}

std::string format_sig6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw DataError("cannot parse number '" + s + "'");
    return v;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r')
        cells.back().pop_back();
    return cells;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path,
                                               const std::string& expected_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path.string() + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw DataError("'" + path.string() + "': unexpected header '" + line + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw DataError("cannot parse integer '" + s + "'");
    return v;
}

constexpr const char* kRunHeader =
    "fold_topic,seed,heuristic,round,labeled_count,holdout_accuracy,validation_accuracy";
constexpr const char* kSummaryHeader =
    "heuristic,baseline,n,mean,variance,avg_diff,p_two_sided,degenerate";

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& contents) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out << contents;
        if (!out.flush()) throw DataError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

std::string run_file_name(int fold_topic, std::uint64_t seed, Heuristic heuristic) {
    return "run_f" + std::to_string(fold_topic) + "_s" + std::to_string(seed) + "_" +
           to_string(heuristic) + ".csv";
}

void write_run_csv(const fs::path& path, const RunResult& run) {
    std::ostringstream out;
    out << kRunHeader << '\n';
    for (const RoundRecord& rec : run.curve)
        out << run.fold_topic << ',' << run.seed << ',' << to_string(run.heuristic) << ','
            << rec.round_index << ',' << rec.labeled_count << ','
            << format_full(rec.holdout_accuracy) << ',' << format_full(rec.validation_accuracy)
            << '\n';
    write_file_atomic(path, out.str());
}

RunResult read_run_csv(const fs::path& path) {
    const auto rows = read_csv(path, kRunHeader);
    if (rows.empty()) throw DataError("'" + path.string() + "' has no round records");
    RunResult run;
    bool first = true;
    for (const auto& cells : rows) {
        if (cells.size() != 7)
            throw DataError("'" + path.string() + "': malformed run record row");
        const int fold = static_cast<int>(parse_u64(cells[0]));
        const std::uint64_t seed = parse_u64(cells[1]);
        const Heuristic h = heuristic_from_string(cells[2]);
        if (first) {
            run.fold_topic = fold;
            run.seed = seed;
            run.heuristic = h;
            first = false;
        } else if (fold != run.fold_topic || seed != run.seed || h != run.heuristic) {
            throw DataError("'" + path.string() + "' mixes records from different runs");
        }
        RoundRecord rec;
        rec.round_index = parse_u64(cells[3]);
        rec.labeled_count = parse_u64(cells[4]);
        rec.holdout_accuracy = parse_double(cells[5]);
        rec.validation_accuracy = parse_double(cells[6]);
        run.curve.push_back(std::move(rec));
    }
    return run;
}

void write_run_meta(const fs::path& path, const RunResult& run, const std::string& retrain_mode) {
    nlohmann::json j;
    j["fold_topic"] = run.fold_topic;
    j["seed"] = run.seed;
    j["heuristic"] = to_string(run.heuristic);
    j["retrain"] = retrain_mode;
    j["wall_seconds"] = nlohmann::json::array();
    j["acquired_counts"] = nlohmann::json::array();
    for (const RoundRecord& rec : run.curve) {
        j["wall_seconds"].push_back(rec.wall_seconds);
        j["acquired_counts"].push_back(rec.acquired_ids.size());
    }
    write_file_atomic(path, j.dump(2) + "\n");
}

std::vector<RunResult> read_all_runs(const fs::path& runs_dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(runs_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.starts_with("run_") && name.ends_with(".csv")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<RunResult> runs;
    runs.reserve(files.size());
    for (const fs::path& f : files) runs.push_back(read_run_csv(f));
    return runs;
}

void write_summary_csv(const fs::path& path, std::span<const SummaryRow> rows) {
    std::ostringstream out;
    out << kSummaryHeader << '\n';
    for (const SummaryRow& row : rows) {
        out << to_string(row.heuristic) << ',' << (row.is_baseline ? 1 : 0) << ',' << row.n << ','
            << format_fixed4(row.mean) << ',' << format_fixed4(row.variance) << ','
            << (row.avg_diff ? format_fixed4(*row.avg_diff) : "") << ','
            << (row.p_two_sided ? format_sig6(*row.p_two_sided) : "") << ','
            << (row.degenerate ? 1 : 0) << '\n';
    }
    write_file_atomic(path, out.str());
}

std::vector<SummaryRow> read_summary_csv(const fs::path& path) {
    const auto raw = read_csv(path, kSummaryHeader);
    std::vector<SummaryRow> rows;
    for (const auto& cells : raw) {
        if (cells.size() != 8) throw DataError("'" + path.string() + "': malformed summary row");
        SummaryRow row;
        row.heuristic = heuristic_from_string(cells[0]);
        row.is_baseline = cells[1] == "1";
        row.n = parse_u64(cells[2]);
        row.mean = parse_double(cells[3]);
        row.variance = parse_double(cells[4]);
        if (!cells[5].empty()) row.avg_diff = parse_double(cells[5]);
        if (!cells[6].empty()) row.p_two_sided = parse_double(cells[6]);
        row.degenerate = cells[7] == "1";
        rows.push_back(row);
    }
    return rows;
}

std::string render_summary_text(std::span<const SummaryRow> rows) {
    std::ostringstream out;
    out << "heuristic             mean    variation  avg.diff  p(two-sided)  n\n";
    for (const SummaryRow& row : rows) {
        std::string name = to_string(row.heuristic);
        if (row.is_baseline) name += " (b.)";
        char line[160];
        std::snprintf(line, sizeof(line), "%-20s  %s  %-9s  %-8s  %-12s  %zu\n", name.c_str(),
                      format_fixed4(row.mean).c_str(), format_fixed4(row.variance).c_str(),
                      row.avg_diff ? format_fixed4(*row.avg_diff).c_str() : "-",
                      row.degenerate ? "degenerate"
                                     : (row.p_two_sided ? format_sig6(*row.p_two_sided).c_str()
                                                        : "-"),
                      row.n);
        out << line;
    }
    return out.str();
}

CurveTable to_curve_table(std::span<const HeuristicCurve> curves) {
    CurveTable table;
    std::size_t max_rounds = 0;
    for (const HeuristicCurve& c : curves) {
        table.heuristics.push_back(c.heuristic);
        max_rounds = std::max(max_rounds, c.points.size());
    }
    table.rows.assign(max_rounds, std::vector<CurveTable::Cell>(curves.size()));
    for (std::size_t h = 0; h < curves.size(); ++h)
        for (std::size_t r = 0; r < curves[h].points.size(); ++r)
            if (curves[h].points[r].count > 0)
                table.rows[r][h] = {curves[h].points[r].mean, curves[h].points[r].stddev};
    return table;
}

void write_curves_csv(const fs::path& path, const CurveTable& table) {
    std::ostringstream out;
    out << "round";
    for (Heuristic h : table.heuristics)
        out << ',' << to_string(h) << "_mean," << to_string(h) << "_stddev";
    out << '\n';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << r;
        for (const CurveTable::Cell& cell : table.rows[r]) {
            out << ',' << (cell.mean ? format_fixed4(*cell.mean) : "") << ','
                << (cell.stddev ? format_fixed4(*cell.stddev) : "");
        }
        out << '\n';
    }
    write_file_atomic(path, out.str());
}

CurveTable read_curves_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path.string() + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_csv_line(line);
    if (header.empty() || header[0] != "round" || header.size() % 2 != 1)
        throw DataError("'" + path.string() + "': unexpected curves header");
    CurveTable table;
    for (std::size_t i = 1; i < header.size(); i += 2) {
        const std::string& name = header[i];
        if (!name.ends_with("_mean"))
            throw DataError("'" + path.string() + "': unexpected column '" + name + "'");
        table.heuristics.push_back(heuristic_from_string(name.substr(0, name.size() - 5)));
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw DataError("'" + path.string() + "': ragged curves row");
        std::vector<CurveTable::Cell> row(table.heuristics.size());
        for (std::size_t h = 0; h < table.heuristics.size(); ++h) {
            const std::string& mean = cells[1 + 2 * h];
            const std::string& stddev = cells[2 + 2 * h];
            if (!mean.empty()) row[h].mean = parse_double(mean);
            if (!stddev.empty()) row[h].stddev = parse_double(stddev);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {

constexpr const char* kCurveColors[] = {"#4C72B0", "#DD8452", "#55A868", "#C44E52",
                                        "#8172B3", "#937860"};

}  // namespace

void write_curves_svg(const fs::path& path, const CurveTable& table, const std::string& title) {
    const double width = 820, height = 520;
    const double left = 70, right = 30, top = 50, bottom = 55;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double y_min = 1.0, y_max = 0.0;
    for (const auto& row : table.rows)
        for (const auto& cell : row)
            if (cell.mean) {
                y_min = std::min(y_min, *cell.mean);
                y_max = std::max(y_max, *cell.mean);
            }
    if (y_min > y_max) {  // no data at all
        y_min = 0.0;
        y_max = 1.0;
    }
    double pad = std::max(0.02, (y_max - y_min) * 0.1);
    y_min = std::max(0.0, y_min - pad);
    y_max = std::min(1.0, y_max + pad);
    const std::size_t rounds = std::max<std::size_t>(table.rows.size(), 2);

    auto x_of = [&](double r) { return left + plot_w * r / static_cast<double>(rounds - 1); };
    auto y_of = [&](double v) { return top + plot_h * (1.0 - (v - y_min) / (y_max - y_min)); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">"
        << title << "</text>\n";

    // Axes and ticks.
    svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double v = y_min + (y_max - y_min) * t / 5.0;
        const double y = y_of(v);
        svg << "<line x1=\"" << left - 4 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\""
            << y << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << left - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_fixed4(v).substr(0, 5) << "</text>\n";
    }
    const std::size_t x_step = std::max<std::size_t>(1, (rounds - 1) / 9);
    for (std::size_t r = 0; r < table.rows.size(); r += x_step) {
        const double x = x_of(static_cast<double>(r));
        svg << "<line x1=\"" << x << "\" y1=\"" << top + plot_h << "\" x2=\"" << x << "\" y2=\""
            << top + plot_h + 4 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << x << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << r
            << "</text>\n";
    }
    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
           "acquisition round</text>\n"
        << "<text x=\"18\" y=\"" << top + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 "
        << top + plot_h / 2 << ")\">holdout accuracy</text>\n";

    // One polyline per heuristic plus a legend entry.
    for (std::size_t h = 0; h < table.heuristics.size(); ++h) {
        const char* color = kCurveColors[h % 6];
        std::ostringstream points;
        for (std::size_t r = 0; r < table.rows.size(); ++r)
            if (table.rows[r][h].mean)
                points << x_of(static_cast<double>(r)) << ',' << y_of(*table.rows[r][h].mean)
                       << ' ';
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
            << points.str() << "\"/>\n";
        const double ly = top + 8 + 18 * static_cast<double>(h);
        svg << "<line x1=\"" << left + plot_w - 150 << "\" y1=\"" << ly << "\" x2=\""
            << left + plot_w - 126 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << left + plot_w - 120 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << to_string(table.heuristics[h])
            << "</text>\n";
    }
    svg << "</svg>\n";
    write_file_atomic(path, svg.str());
}

}  // namespace alh
