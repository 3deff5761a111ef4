// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "raggednn/ad/grad_check.hpp"
#include "raggednn/nn/model.hpp"

namespace raggednn {

inline const std::vector<std::string>& gradcheck_layer_names() {
    static const std::vector<std::string> names{"gcn",    "mpn",    "interaction", "schnet",
                                                "megnet", "unet",   "set2set",     "topk"};
    return names;
}

namespace detail {

/// Small random batch with edge features and state, suitable for every
/// architecture. Features are sampled with a margin from relu kinks.
inline GraphBatch gradcheck_batch(Rng& rng, Index node_width, Index edge_width,
                                  Index state_width) {
    std::vector<Matrix> node_blocks, edge_blocks;
    GraphBatch g;
    g.edge_index.splits = {0};
    const Index graphs = 3;
    for (Index b = 0; b < graphs; ++b) {
        const Index n = 2 + rng.uniform_index(4);
        node_blocks.push_back(rng.uniform_matrix(n, node_width, 0.1, 1.0));
        std::set<std::pair<Index, Index>> seen;
        for (Index tries = 0; tries < 3 * n; ++tries) {
            Index u = rng.uniform_index(n), v = rng.uniform_index(n);
            if (u != v && seen.insert({u, v}).second) g.edge_index.values.push_back({u, v});
        }
        g.edge_index.splits.push_back(static_cast<Index>(g.edge_index.values.size()));
        edge_blocks.push_back(rng.uniform_matrix(
            g.edge_index.splits[b + 1] - g.edge_index.splits[b], edge_width, 0.1, 1.0));
    }
    g.nodes = ragged_from_rows(node_blocks);
    g.edges = ragged_from_rows(edge_blocks);
    g.edges->splits = g.edge_index.splits;
    g.state = rng.uniform_matrix(graphs, state_width, 0.1, 1.0);
    g.validate();
    return g;
}

inline ModelSpec gradcheck_spec(const std::string& model, std::uint64_t seed) {
    ModelSpec spec;
    spec.model = model;
    spec.task = "graph_regression";
    spec.node_input = 3;
    spec.edge_input = 4;
    spec.state_input = 2;
    spec.hidden = 5;
    spec.output = 2;
    spec.steps = 2;
    spec.layers = {5, 4};
    spec.pool_ratio = 0.5;
    spec.seed = seed;
    return spec;
}

} // namespace detail

/// Finite-difference check of one named layer/model at a fixed seed.
/// Returns the max relative error across every parameter coordinate.
inline double gradcheck_layer(const std::string& name, std::uint64_t seed) {
    const auto& names = gradcheck_layer_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string valid;
        for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
        throw ConfigError("gradcheck: unknown layer '" + name + "' (valid: " + valid + ")");
    }
    Rng rng(seed + 17);

    if (name == "set2set") {
        Set2Set layer(4, 3, rng);
        Matrix h = rng.uniform_matrix(8, 4, 0.1, 1.0);
        std::vector<Index> ids{0, 0, 0, 1, 1, 1, 1, 1};
        std::vector<ParamRef> refs;
        layer.collect("set2set", refs);
        std::vector<ad::Variable*> params;
        for (auto& r : refs) params.push_back(r.var);
        auto f = [&](bool with_grads) {
            ad::Tape t;
            ad::NodeId out = layer.apply(t, t.constant(h), ids, 2);
            ad::NodeId loss = t.mean_all(t.square(out));
            if (with_grads) t.backward(loss);
            return t.value(loss)(0, 0);
        };
        return ad::max_rel_grad_error(f, params);
    }

    if (name == "topk") {
        TopKPool pool(4, 0.6, rng);
        Matrix h = rng.uniform_matrix(7, 4, 0.1, 1.0);
        std::vector<Index> node_ids{0, 0, 0, 0, 1, 1, 1};
        EdgeList edges{{0, 1}, {2, 3}, {1, 0}, {4, 5}, {6, 4}};
        std::vector<Index> edge_ids{0, 0, 0, 1, 1};
        std::vector<ad::Variable*> params{&pool.projection};
        auto f = [&](bool with_grads) {
            ad::Tape t;
            TopKPoolOut out = pool.apply(t, t.constant(h), node_ids, 2, edges, edge_ids);
            ad::NodeId restored = topk_unpool(t, out.values, out.kept, 7);
            ad::NodeId loss = t.mean_all(t.square(restored));
            if (with_grads) t.backward(loss);
            return t.value(loss)(0, 0);
        };
        return ad::max_rel_grad_error(f, params);
    }

    // remaining names are full architectures
    ModelSpec spec = detail::gradcheck_spec(name, seed);
    std::unique_ptr<Model> model = build_model(spec);
    DisjointBatch batch = to_disjoint(detail::gradcheck_batch(rng, spec.node_input,
                                                              spec.edge_input, spec.state_input));
    std::vector<ParamRef> refs = model->parameters();
    std::vector<ad::Variable*> params;
    for (auto& r : refs) params.push_back(r.var);
    auto f = [&](bool with_grads) {
        ad::Tape t;
        Prediction pred = model->forward(t, batch);
        ad::NodeId loss = t.mean_all(t.square(pred.output));
        if (with_grads) t.backward(loss);
        return t.value(loss)(0, 0);
    };
    return ad::max_rel_grad_error(f, params);
}

} // namespace raggednn
