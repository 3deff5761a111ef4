// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
//
// Writes the synthetic benchmark datasets used by the examples, tests,
// and acceptance suite.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "raggednn/data/dataset.hpp"
#include "raggednn/data/synthetic.hpp"

using namespace raggednn;

namespace {

void write_citation_sample(const std::string& nodes_path, const std::string& edges_path,
                           std::uint64_t seed) {
    // tiny two-community citation network with string ids
    GraphRecord g = two_block_graph(24, 0.3, 0.03, 4, 0.5, seed);
    std::ofstream nodes(nodes_path);
    for (Index i = 0; i < g.num_nodes(); ++i) {
        nodes << "paper" << i;
        for (Index c = 0; c < g.node_features.cols(); ++c) nodes << "\t" << g.node_features(i, c);
        nodes << "\t" << ((*g.node_labels)[static_cast<std::size_t>(i)] == 0 ? "theory" : "systems")
              << "\n";
    }
    std::ofstream edges(edges_path);
    for (const Edge& e : g.edge_index)
        if (e.receiver < e.sender)  // one line per undirected citation
            edges << "paper" << e.receiver << "\tpaper" << e.sender << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic dataset generator"};
    std::string kind, out = ".";
    Index count = 0;
    std::uint64_t seed = 0;
    app.add_option("--kind", kind, "mutag|qm9|sbm|citation")->required();
    app.add_option("--out", out, "output directory");
    app.add_option("--count", count, "number of graphs (mutag/qm9)");
    app.add_option("--seed", seed, "generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (kind == "mutag") {
            if (count == 0) count = 20;
            write_jsonl_dataset(out + "/mutag_subset.jsonl", mutag_like_dataset(count, seed));
            std::cerr << "wrote " << out << "/mutag_subset.jsonl (" << count << " graphs)\n";
        } else if (kind == "qm9") {
            if (count == 0) count = 1000;
            write_jsonl_dataset(out + "/qm9_subset.jsonl", molecule_cloud_dataset(count, seed));
            std::cerr << "wrote " << out << "/qm9_subset.jsonl (" << count << " molecules)\n";
        } else if (kind == "sbm") {
            write_jsonl_dataset(out + "/sbm_nodes.jsonl",
                                {two_block_graph(200, 0.1, 0.01, 8, 1.0, seed)});
            std::cerr << "wrote " << out << "/sbm_nodes.jsonl\n";
        } else if (kind == "citation") {
            write_citation_sample(out + "/citation_nodes.tsv", out + "/citation_edges.tsv", seed);
            std::cerr << "wrote " << out << "/citation_{nodes,edges}.tsv\n";
        } else {
            std::cerr << "error: unknown kind '" << kind << "' (mutag|qm9|sbm|citation)\n";
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
