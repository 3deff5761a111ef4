// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "raggednn/data/batching.hpp"
#include "raggednn/data/dataset.hpp"
#include "raggednn/data/synthetic.hpp"

using namespace raggednn;

namespace {

/// Temp directory wiped on destruction.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("raggednn_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

} // namespace

TEST_CASE("jsonl loader round trip and validation") {
    TempDir dir;
    SECTION("single edgeless classified graph") {
        write_file(dir.file("a.jsonl"), R"({"id":"g0","nodes":[[1.0]],"edges":[],"label":0})"
                                        "\n");
        auto [spec, records] = load_jsonl_dataset(dir.file("a.jsonl"));
        CHECK(spec.task == Task::GraphClassification);
        CHECK(records.size() == 1);
        CHECK(records[0].num_nodes() == 1);
        CHECK(records[0].num_edges() == 0);
        CHECK(records[0].label == 0);
    }
    SECTION("edge index out of range names the line") {
        write_file(dir.file("b.jsonl"),
                   R"({"id":"g0","nodes":[[1.0],[2.0]],"edges":[[0,5]],"label":0})"
                   "\n");
        CHECK_THROWS_WITH(load_jsonl_dataset(dir.file("b.jsonl")),
                          Catch::Matchers::ContainsSubstring("line 1") &&
                              Catch::Matchers::ContainsSubstring("5"));
    }
    SECTION("three lines preserve order") {
        std::string lines;
        for (int i = 0; i < 3; ++i)
            lines += R"({"id":"g)" + std::to_string(i) + R"(","nodes":[[1.0]],"edges":[],"label":0})" +
                     "\n";
        write_file(dir.file("c.jsonl"), lines);
        auto [spec, records] = load_jsonl_dataset(dir.file("c.jsonl"));
        REQUIRE(records.size() == 3);
        CHECK(records[0].id == "g0");
        CHECK(records[2].id == "g2");
    }
    SECTION("unknown key is rejected") {
        write_file(dir.file("d.jsonl"), R"({"id":"g0","nodes":[[1.0]],"edgs":[],"label":0})"
                                        "\n");
        CHECK_THROWS_WITH(load_jsonl_dataset(dir.file("d.jsonl")),
                          Catch::Matchers::ContainsSubstring("edgs"));
    }
    SECTION("both targets and label rejected") {
        write_file(dir.file("e.jsonl"),
                   R"({"id":"g0","nodes":[[1.0]],"edges":[],"label":0,"targets":[1.0]})"
                   "\n");
        CHECK_THROWS_AS(load_jsonl_dataset(dir.file("e.jsonl")), ValidationError);
    }
    SECTION("loading twice yields identical structures") {
        auto records = mutag_like_dataset(6, 3);
        write_jsonl_dataset(dir.file("f.jsonl"), records);
        auto [s1, r1] = load_jsonl_dataset(dir.file("f.jsonl"));
        auto [s2, r2] = load_jsonl_dataset(dir.file("f.jsonl"));
        REQUIRE(r1.size() == r2.size());
        for (std::size_t i = 0; i < r1.size(); ++i) {
            CHECK(r1[i].node_features == r2[i].node_features);
            CHECK(r1[i].edge_index == r2[i].edge_index);
        }
        // and equals what was written
        for (std::size_t i = 0; i < r1.size(); ++i) {
            CHECK(r1[i].node_features == records[i].node_features);
            CHECK(r1[i].label == records[i].label);
        }
    }
}

TEST_CASE("citation loader") {
    TempDir dir;
    SECTION("one undirected citation becomes two rows") {
        write_file(dir.file("nodes.tsv"), "n1\t1.0\t0.0\tA\nn2\t0.0\t1.0\tB\nn3\t1.0\t1.0\tA\n");
        write_file(dir.file("edges.tsv"), "n1\tn2\n");
        auto [spec, rec] = load_citation_dataset(dir.file("nodes.tsv"), dir.file("edges.tsv"));
        CHECK(spec.task == Task::NodeClassification);
        CHECK(spec.num_classes == 2);
        CHECK(rec.num_nodes() == 3);
        REQUIRE(rec.num_edges() == 2);
        CHECK(rec.edge_index[0] == Edge{0, 1});
        CHECK(rec.edge_index[1] == Edge{1, 0});
        // labels {A,B,A} map lexicographically: A=0, B=1
        CHECK(*rec.node_labels == std::vector<int>{0, 1, 0});
    }
    SECTION("duplicate node id") {
        write_file(dir.file("nodes.tsv"), "n1\t1.0\tA\nn1\t0.0\tB\n");
        write_file(dir.file("edges.tsv"), "");
        CHECK_THROWS_WITH(load_citation_dataset(dir.file("nodes.tsv"), dir.file("edges.tsv")),
                          Catch::Matchers::ContainsSubstring("n1"));
    }
    SECTION("dangling endpoint names the id") {
        write_file(dir.file("nodes.tsv"), "n1\t1.0\tA\n");
        write_file(dir.file("edges.tsv"), "n1\tnX\n");
        CHECK_THROWS_WITH(load_citation_dataset(dir.file("nodes.tsv"), dir.file("edges.tsv")),
                          Catch::Matchers::ContainsSubstring("nX"));
    }
}

TEST_CASE("expand_distances") {
    GraphRecord rec;
    rec.id = "pair";
    rec.node_features = Matrix{{1}, {1}};
    rec.positions = Matrix{{0, 0, 0}, {1, 0, 0}};
    rec.targets = std::vector<double>{0.0};

    SECTION("two points within the cutoff give two directed edges") {
        GraphRecord out = expand_distances(rec, 2.0, {.count = 5, .gamma = 4.0, .r_max = 2.0});
        REQUIRE(out.num_edges() == 2);
        // feature peaks at the center closest to d=1 (r_max=2, 5 centers -> mu={0,.5,1,1.5,2})
        CHECK((*out.edge_features)(0, 2) == 1.0);
    }
    SECTION("cutoff below the minimum distance leaves the graph edgeless") {
        GraphRecord out = expand_distances(rec, 0.5);
        CHECK(out.num_edges() == 0);
    }
    SECTION("edge set equals the brute-force pair scan and is symmetric") {
        Rng rng(9);
        GraphRecord cloud;
        cloud.id = "cloud";
        cloud.node_features = Matrix(4, 1, 1.0);
        cloud.positions = rng.uniform_matrix(4, 3, -1.0, 1.0);
        cloud.targets = std::vector<double>{0.0};
        const double rc = 1.3;
        GraphRecord out = expand_distances(cloud, rc);

        std::set<std::pair<Index, Index>> got;
        for (const Edge& e : out.edge_index) got.insert({e.receiver, e.sender});
        std::set<std::pair<Index, Index>> want;
        for (Index i = 0; i < 4; ++i)
            for (Index j = 0; j < 4; ++j) {
                if (i == j) continue;
                double d2 = 0.0;
                for (Index c = 0; c < 3; ++c) {
                    double delta = (*cloud.positions)(i, c) - (*cloud.positions)(j, c);
                    d2 += delta * delta;
                }
                if (std::sqrt(d2) <= rc) want.insert({i, j});
            }
        CHECK(got == want);
        for (const auto& [i, j] : got) CHECK(got.count({j, i}) == 1);
    }
    SECTION("bad cutoff") {
        CHECK_THROWS_AS(expand_distances(rec, 0.0), ContractError);
    }
}

TEST_CASE("split_dataset") {
    auto records = mutag_like_dataset(10, 0);
    SECTION("fractions produce the documented sizes") {
        auto [train, val, test] = split_dataset(records, {0.8, 0.1, 0.1}, 0);
        CHECK(train.size() == 8);
        CHECK(val.size() == 1);
        CHECK(test.size() == 1);
    }
    SECTION("same seed gives the same split") {
        auto [a1, b1, c1] = split_dataset(records, {0.6, 0.2, 0.2}, 42);
        auto [a2, b2, c2] = split_dataset(records, {0.6, 0.2, 0.2}, 42);
        REQUIRE(a1.size() == a2.size());
        for (std::size_t i = 0; i < a1.size(); ++i) CHECK(a1[i].id == a2[i].id);
    }
    SECTION("splits cover the input disjointly") {
        auto [train, val, test] = split_dataset(records, {0.5, 0.3, 0.2}, 7);
        std::set<std::string> ids;
        for (const auto& r : train) ids.insert(r.id);
        for (const auto& r : val) ids.insert(r.id);
        for (const auto& r : test) ids.insert(r.id);
        CHECK(ids.size() == records.size());
        CHECK(train.size() + val.size() + test.size() == records.size());
    }
    SECTION("bad fractions") {
        CHECK_THROWS_AS(split_dataset(records, {0.5, 0.2, 0.2}, 0), ContractError);
    }
}

TEST_CASE("batch_graphs") {
    auto records = mutag_like_dataset(5, 1);
    SECTION("batch sizes [2,2,1]") {
        auto batches = batch_graphs(records, 2, false);
        REQUIRE(batches.size() == 3);
        CHECK(batches[0].num_graphs() == 2);
        CHECK(batches[2].num_graphs() == 1);
        CHECK(batches[0].labels.size() == 2);
    }
    SECTION("no shuffle preserves order") {
        auto batches = batch_graphs(records, 3, false);
        CHECK(batches[0].graphs.nodes.row_count(0) == records[0].num_nodes());
        CHECK(batches[1].graphs.nodes.row_count(1) == records[4].num_nodes());
    }
    SECTION("unbatching recovers every record's node count") {
        auto batches = batch_graphs(records, 2, true, 3);
        std::multiset<Index> want, got;
        for (const auto& r : records) want.insert(r.num_nodes());
        for (const auto& b : batches)
            for (Index g = 0; g < b.num_graphs(); ++g) got.insert(b.graphs.nodes.row_count(g));
        CHECK(got == want);
    }
    SECTION("batching then to_disjoint preserves totals") {
        auto batches = batch_graphs(records, 2, true, 9);
        Index nodes = 0, edges = 0;
        for (const auto& b : batches) {
            DisjointBatch d = to_disjoint(b.graphs);
            nodes += d.num_nodes();
            edges += d.num_edges();
        }
        Index want_nodes = 0, want_edges = 0;
        for (const auto& r : records) {
            want_nodes += r.num_nodes();
            want_edges += r.num_edges();
        }
        CHECK(nodes == want_nodes);
        CHECK(edges == want_edges);
    }
    SECTION("bad batch size") {
        CHECK_THROWS_AS(batch_graphs(records, 0, false), ContractError);
    }
}

TEST_CASE("synthetic generators are deterministic and well-formed") {
    SECTION("two-block graph") {
        GraphRecord a = two_block_graph(60, 0.1, 0.01, 8, 1.0, 5);
        GraphRecord b = two_block_graph(60, 0.1, 0.01, 8, 1.0, 5);
        CHECK(a.node_features == b.node_features);
        CHECK(a.edge_index == b.edge_index);
        CHECK(a.node_labels->size() == 60);
        // symmetric edges
        std::set<std::pair<Index, Index>> pairs;
        for (const Edge& e : a.edge_index) pairs.insert({e.receiver, e.sender});
        for (const auto& [i, j] : pairs) CHECK(pairs.count({j, i}) == 1);
    }
    SECTION("molecule clouds carry positions and three targets") {
        auto mols = molecule_cloud_dataset(10, 2);
        CHECK(mols.size() == 10);
        for (const auto& m : mols) {
            CHECK(m.positions.has_value());
            CHECK(m.targets->size() == 3);
            // gap = lumo - homo by construction
            CHECK((*m.targets)[2] ==
                  Catch::Approx((*m.targets)[1] - (*m.targets)[0]).margin(1e-12));
        }
    }
    SECTION("mutag-like set is half positive with motif") {
        auto graphs = mutag_like_dataset(20, 7);
        int positives = 0;
        for (const auto& g : graphs) positives += *g.label;
        CHECK(positives == 10);
    }
}
