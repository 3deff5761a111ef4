// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numeric>
#include <vector>

#include "raggednn/data/dataset.hpp"
#include "raggednn/graph.hpp"
#include "raggednn/random.hpp"

namespace raggednn {

/// A GraphBatch plus the supervision that rides along with it. Exactly
/// one of the supervision fields is populated, matching the task.
struct TrainingBatch {
    GraphBatch graphs;
    Matrix targets;                // (B, num_targets) for graph regression
    std::vector<int> labels;       // (B) for graph classification
    std::vector<int> node_labels;  // (N_total) for node classification

    Index num_graphs() const { return graphs.num_graphs(); }
};

inline GraphBatch graphs_to_batch(const std::vector<const GraphRecord*>& chunk) {
    GraphBatch batch;
    std::vector<Matrix> node_blocks;
    std::vector<Matrix> edge_blocks;
    bool any_edges_feats = false, any_state = false;
    for (const GraphRecord* r : chunk) {
        if (r->edge_features) any_edges_feats = true;
        if (r->state) any_state = true;
    }
    batch.edge_index.splits = {0};
    for (const GraphRecord* r : chunk) {
        node_blocks.push_back(r->node_features);
        for (const Edge& e : r->edge_index) batch.edge_index.values.push_back(e);
        batch.edge_index.splits.push_back(static_cast<Index>(batch.edge_index.values.size()));
        if (any_edges_feats) {
            if (!r->edge_features && r->num_edges() > 0)
                throw ValidationError("batch_graphs: graph '" + r->id +
                                      "' lacks edge features present elsewhere in the batch");
            edge_blocks.push_back(r->edge_features ? *r->edge_features : Matrix(0, 0));
        }
    }
    batch.nodes = ragged_from_rows(node_blocks);
    if (any_edges_feats) {
        Ragged e = ragged_from_rows(edge_blocks);
        e.splits = batch.edge_index.splits;
        batch.edges = std::move(e);
    }
    if (any_state) {
        Index width = 0;
        for (const GraphRecord* r : chunk)
            if (r->state) width = static_cast<Index>(r->state->size());
        Matrix state(static_cast<Index>(chunk.size()), width);
        for (std::size_t b = 0; b < chunk.size(); ++b) {
            if (!chunk[b]->state)
                throw ValidationError("batch_graphs: graph '" + chunk[b]->id +
                                      "' lacks the state vector present elsewhere in the batch");
            if (static_cast<Index>(chunk[b]->state->size()) != width)
                throw ValidationError("batch_graphs: state width differs across the batch");
            for (Index c = 0; c < width; ++c)
                state(static_cast<Index>(b), c) = (*chunk[b]->state)[static_cast<std::size_t>(c)];
        }
        batch.state = std::move(state);
    }
    batch.validate();
    return batch;
}

/// Pack records into mini-batches of `batch_size` graphs (the final
/// batch may be smaller). Shuffling is deterministic in the seed.
inline std::vector<TrainingBatch> batch_graphs(const std::vector<GraphRecord>& records,
                                               Index batch_size, bool shuffle,
                                               std::uint64_t seed = 0) {
    if (batch_size < 1) throw ContractError("batch_graphs: batch_size must be >= 1");
    std::vector<Index> order(records.size());
    std::iota(order.begin(), order.end(), Index{0});
    if (shuffle) {
        Rng rng(seed);
        rng.shuffle(order);
    }

    std::vector<TrainingBatch> batches;
    for (std::size_t at = 0; at < order.size(); at += static_cast<std::size_t>(batch_size)) {
        const std::size_t end = std::min(order.size(), at + static_cast<std::size_t>(batch_size));
        std::vector<const GraphRecord*> chunk;
        for (std::size_t i = at; i < end; ++i)
            chunk.push_back(&records[static_cast<std::size_t>(order[i])]);

        TrainingBatch tb;
        tb.graphs = graphs_to_batch(chunk);
        const GraphRecord& first = *chunk.front();
        if (first.targets) {
            tb.targets = Matrix(static_cast<Index>(chunk.size()),
                                static_cast<Index>(first.targets->size()));
            for (std::size_t b = 0; b < chunk.size(); ++b) {
                if (!chunk[b]->targets)
                    throw ValidationError("batch_graphs: graph '" + chunk[b]->id + "' has no targets");
                for (std::size_t c = 0; c < chunk[b]->targets->size(); ++c)
                    tb.targets(static_cast<Index>(b), static_cast<Index>(c)) = (*chunk[b]->targets)[c];
            }
        } else if (first.label) {
            for (const GraphRecord* r : chunk) {
                if (!r->label)
                    throw ValidationError("batch_graphs: graph '" + r->id + "' has no label");
                tb.labels.push_back(*r->label);
            }
        } else {
            for (const GraphRecord* r : chunk)
                for (int l : *r->node_labels) tb.node_labels.push_back(l);
        }
        batches.push_back(std::move(tb));
    }
    return batches;
}

} // namespace raggednn
