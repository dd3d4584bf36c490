// Writes a synthetic pairwise-strength corpus in the canonical TSV layout.
// The bundled data/synthetic.tsv was produced with the defaults below.

#include <iostream>

#include <CLI11.hpp>

#include "alh/corpus.hpp"
#include "alh/errors.hpp"
#include "alh/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"synthetic corpus generator"};
    std::string sizes = "380,480,560,580";
    std::string out_path;
    std::uint64_t seed = 42;
    double noise = 0.05;
    bool stance_tags = false;
    app.add_option("--topic-sizes", sizes, "comma list of pairs per topic");
    app.add_option("--seed", seed, "generator seed");
    app.add_option("--noise", noise, "label flip probability");
    app.add_flag("--stance-tags", stance_tags, "emit two stance groups per topic");
    app.add_option("--out", out_path, "output TSV")->required();
    CLI11_PARSE(app, argc, argv);

    try {
        alh::SyntheticTextSpec spec;
        spec.topic_sizes.clear();
        std::size_t start = 0;
        while (start <= sizes.size()) {
            const std::size_t comma = sizes.find(',', start);
            const std::string part = sizes.substr(start, comma - start);
            spec.topic_sizes.push_back(static_cast<std::size_t>(std::stoul(part)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        spec.seed = seed;
        spec.label_noise = noise;
        spec.stance_tags = stance_tags;
        const alh::Dataset ds = alh::make_synthetic_pairs(spec);
        alh::save_canonical_tsv(ds, out_path);
        std::cout << "wrote " << ds.pairs.size() << " pairs over " << ds.topics.size()
                  << " topics to " << out_path << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
