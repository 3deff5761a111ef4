// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "raggednn/nn/model.hpp"
#include "support/oracles.hpp"

using namespace raggednn;

namespace {

const std::vector<std::string> kAllModels{"gcn", "interaction", "mpn", "schnet", "megnet", "unet"};

ModelSpec small_spec(const std::string& model, const std::string& task) {
    ModelSpec s;
    s.model = model;
    s.task = task;
    s.node_input = 3;
    s.edge_input = 4;
    s.state_input = 2;
    s.hidden = 5;
    s.output = 2;
    s.steps = 2;
    s.layers = {5, 4};
    s.seed = 11;
    return s;
}

Matrix forward_values(Model& m, const GraphBatch& g) {
    ad::Tape t;
    Prediction p = m.forward(t, to_disjoint(g));
    return t.value(p.output);
}

GraphBatch random_feature_batch(Rng& rng, Index min_graphs = 1) {
    oracles::RandomBatchOptions opt;
    opt.max_graphs = 6;
    opt.min_nodes = 1;
    opt.max_nodes = 12;
    opt.max_edges = 30;
    opt.node_width = 3;
    opt.edge_width = 4;
    opt.state_width = 2;
    GraphBatch g = oracles::random_batch(rng, opt);
    while (g.num_graphs() < min_graphs) g = oracles::random_batch(rng, opt);
    return g;
}

} // namespace

TEST_CASE("model spec json round trip and strictness") {
    nlohmann::json j = {{"model", "mpn"},
                        {"task", "graph_regression"},
                        {"readout", "set2set"},
                        {"widths", {{"node_input", 4}, {"output", 3}, {"hidden", 8}}},
                        {"steps", 3},
                        {"seed", 5}};
    ModelSpec s = model_spec_from_json(j);
    CHECK(s.model == "mpn");
    CHECK(s.node_input == 4);
    CHECK(s.output == 3);
    CHECK(s.message_width() == 8);

    ModelSpec back = model_spec_from_json(model_spec_to_json(s));
    CHECK(back.hidden == s.hidden);
    CHECK(back.readout == s.readout);

    CHECK_THROWS_AS(model_spec_from_json(nlohmann::json{{"modle", "gcn"}}), ConfigError);
    CHECK_THROWS_AS(model_spec_from_json(nlohmann::json{{"widths", {{"nodes", 3}}}}), ConfigError);
}

TEST_CASE("build_model validates the configuration") {
    ModelSpec s = small_spec("gcn", "node_classification");
    SECTION("unknown architecture") {
        s.model = "transformer";
        CHECK_THROWS_WITH(build_model(s), Catch::Matchers::ContainsSubstring("transformer"));
    }
    SECTION("missing output width") {
        s.output = 0;
        CHECK_THROWS_WITH(build_model(s), Catch::Matchers::ContainsSubstring("widths.output"));
    }
    SECTION("broken layer width names the layer") {
        s.layers = {5, -1};
        CHECK_THROWS_WITH(build_model(s), Catch::Matchers::ContainsSubstring("layers[1]"));
    }
    SECTION("unknown readout") {
        s.task = "graph_classification";
        s.readout = "median";
        CHECK_THROWS_WITH(build_model(s), Catch::Matchers::ContainsSubstring("median"));
    }
    SECTION("set2set rejected for schnet") {
        ModelSpec sch = small_spec("schnet", "graph_regression");
        sch.readout = "set2set";
        CHECK_THROWS_AS(build_model(sch), ConfigError);
    }
    SECTION("bad task") {
        s.task = "segmentation";
        CHECK_THROWS_AS(build_model(s), ConfigError);
    }
}

TEST_CASE("shape contracts per task") {
    Rng rng(123);
    GraphBatch g = random_feature_batch(rng, 2);

    SECTION("gcn node task emits per-node class scores") {
        auto m = build_model(small_spec("gcn", "node_classification"));
        ad::Tape t;
        Prediction p = m->forward(t, to_disjoint(g));
        CHECK(p.per_node);
        CHECK(t.value(p.output).rows() == g.nodes.total_rows());
        CHECK(t.value(p.output).cols() == 2);
    }
    SECTION("mpn graph regression emits one row per graph") {
        ModelSpec s = small_spec("mpn", "graph_regression");
        s.steps = 3;
        s.readout = "set2set";
        auto m = build_model(s);
        ad::Tape t;
        Prediction p = m->forward(t, to_disjoint(g));
        CHECK_FALSE(p.per_node);
        CHECK(t.value(p.output).rows() == g.num_graphs());
        CHECK(t.value(p.output).cols() == 2);
    }
    SECTION("unet degenerates gracefully on a single-node graph") {
        GraphBatch one;
        one.nodes = ragged_from_rows({Matrix{{1, 2, 3}}});
        one.edge_index.splits = {0, 0};
        auto m = build_model(small_spec("unet", "graph_classification"));
        Matrix out = forward_values(*m, one);
        CHECK(out.rows() == 1);
        CHECK(out.cols() == 2);
    }
}

TEST_CASE("models rebuilt from the same seed are identical") {
    ModelSpec s = small_spec("megnet", "graph_regression");
    auto a = build_model(s);
    auto b = build_model(s);
    auto pa = a->parameters();
    auto pb = b->parameters();
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
        CHECK(pa[i].name == pb[i].name);
        CHECK(pa[i].var->value == pb[i].var->value);
    }
}

TEST_CASE("batched evaluation equals stacked per-graph evaluation") {
    Rng rng(321);
    for (const auto& name : kAllModels) {
        ModelSpec s = small_spec(name, "graph_regression");
        auto model = build_model(s);
        for (int it = 0; it < 8; ++it) {
            GraphBatch g = random_feature_batch(rng);
            Matrix batched = forward_values(*model, g);
            Matrix stacked(0, 0);
            std::vector<Matrix> rows;
            for (Index b = 0; b < g.num_graphs(); ++b)
                rows.push_back(forward_values(*model, oracles::slice_batch(g, b)));
            stacked = Matrix(g.num_graphs(), rows.front().cols());
            for (Index b = 0; b < g.num_graphs(); ++b)
                for (Index c = 0; c < stacked.cols(); ++c) stacked(b, c) = rows[static_cast<std::size_t>(b)](0, c);
            INFO("model " << name << " iteration " << it);
            CHECK(max_abs_diff(batched, stacked) <= 1e-10);
        }
    }
}

TEST_CASE("graph outputs are invariant under node relabeling") {
    Rng rng(654);
    for (const auto& name : kAllModels) {
        auto model = build_model(small_spec(name, "graph_regression"));
        for (int it = 0; it < 4; ++it) {
            GraphBatch g = random_feature_batch(rng);
            Matrix base = forward_values(*model, g);
            for (int rep = 0; rep < 3; ++rep) {
                GraphBatch permuted = g;
                for (Index b = 0; b < g.num_graphs(); ++b) {
                    std::vector<Index> perm(static_cast<std::size_t>(g.nodes.row_count(b)));
                    std::iota(perm.begin(), perm.end(), Index{0});
                    rng.shuffle(perm);
                    permuted = oracles::permute_graph_nodes(permuted, b, perm);
                }
                INFO("model " << name);
                CHECK(max_abs_diff(base, forward_values(*model, permuted)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("node outputs are equivariant under node relabeling") {
    Rng rng(987);
    for (const auto& name : kAllModels) {
        auto model = build_model(small_spec(name, "node_classification"));
        GraphBatch g = random_feature_batch(rng, 2);
        Matrix base = forward_values(*model, g);

        GraphBatch permuted = g;
        std::vector<std::vector<Index>> perms;
        for (Index b = 0; b < g.num_graphs(); ++b) {
            std::vector<Index> perm(static_cast<std::size_t>(g.nodes.row_count(b)));
            std::iota(perm.begin(), perm.end(), Index{0});
            rng.shuffle(perm);
            permuted = oracles::permute_graph_nodes(permuted, b, perm);
            perms.push_back(perm);
        }
        Matrix moved = forward_values(*model, permuted);
        for (Index b = 0; b < g.num_graphs(); ++b) {
            const Index base_row = g.nodes.splits[b];
            const auto& perm = perms[static_cast<std::size_t>(b)];
            for (Index i = 0; i < g.nodes.row_count(b); ++i)
                for (Index c = 0; c < base.cols(); ++c) {
                    INFO("model " << name);
                    CHECK(std::abs(base(base_row + i, c) -
                                   moved(base_row + perm[static_cast<std::size_t>(i)], c)) <= 1e-10);
                }
        }
    }
}
