// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "raggednn/errors.hpp"
#include "raggednn/ragged.hpp"

namespace raggednn {

/// Mini-batch of graphs in ragged form: per-graph node features, local
/// edge indices, optional edge features and an optional per-graph state
/// vector (the graph-level input of MegNet-style models).
struct GraphBatch {
    Ragged nodes;                  // (B, None, F_n)
    RaggedEdges edge_index;        // (B, None, 2), graph-local
    std::optional<Ragged> edges;   // (B, None, F_e), splits mirror edge_index
    std::optional<Matrix> state;   // (B, F_u)

    Index num_graphs() const { return nodes.batch_size(); }

    void validate() const {
        nodes.validate();
        edge_index.validate();
        if (nodes.batch_size() != edge_index.batch_size())
            throw ValidationError("GraphBatch: nodes batch " + std::to_string(nodes.batch_size()) +
                                  " != edge_index batch " + std::to_string(edge_index.batch_size()));
        for (Index b = 0; b < num_graphs(); ++b) {
            const Index n = nodes.row_count(b);
            for (Index k = edge_index.splits[b]; k < edge_index.splits[b + 1]; ++k) {
                const Edge& e = edge_index.values[static_cast<std::size_t>(k)];
                if (e.receiver < 0 || e.receiver >= n || e.sender < 0 || e.sender >= n)
                    throw ValidationError("GraphBatch: edge (" + std::to_string(e.receiver) + "," +
                                          std::to_string(e.sender) + ") out of range for graph " +
                                          std::to_string(b) + " with " + std::to_string(n) +
                                          " nodes");
            }
        }
        if (edges) {
            edges->validate();
            if (edges->splits != edge_index.splits)
                throw ValidationError("GraphBatch: edge feature splits differ from edge_index");
        }
        if (state && state->rows() != num_graphs())
            throw ValidationError("GraphBatch: state rows " + std::to_string(state->rows()) +
                                  " != batch size " + std::to_string(num_graphs()));
    }

    friend bool operator==(const GraphBatch&, const GraphBatch&) = default;
};

/// The same batch joined into one large graph: concatenated node matrix,
/// globally offset edge indices, and per-node/per-edge graph ids that
/// keep the subgraph membership. Blocks are laid out graph by graph.
struct DisjointBatch {
    Matrix node_matrix;                 // (N_total, F_n)
    EdgeList edge_index;                // (M_total), global indices
    std::optional<Matrix> edge_matrix;  // (M_total, F_e)
    std::vector<Index> node_graph_id;   // (N_total), non-decreasing
    std::vector<Index> edge_graph_id;   // (M_total)
    std::optional<Matrix> state;        // (B, F_u), carried for round trips
    Index num_graphs = 0;

    Index num_nodes() const { return node_matrix.rows(); }
    Index num_edges() const { return static_cast<Index>(edge_index.size()); }

    /// Node counts per graph recovered from the blockwise graph ids.
    std::vector<Index> node_counts() const {
        std::vector<Index> counts(static_cast<std::size_t>(num_graphs), 0);
        for (Index id : node_graph_id) ++counts[static_cast<std::size_t>(id)];
        return counts;
    }
};

inline DisjointBatch to_disjoint(const GraphBatch& g) {
    g.validate();
    DisjointBatch d;
    d.num_graphs = g.num_graphs();
    d.node_matrix = g.nodes.values;
    d.node_graph_id.resize(static_cast<std::size_t>(g.nodes.total_rows()));
    for (Index b = 0; b < d.num_graphs; ++b)
        for (Index i = g.nodes.splits[b]; i < g.nodes.splits[b + 1]; ++i)
            d.node_graph_id[static_cast<std::size_t>(i)] = b;

    d.edge_index.reserve(g.edge_index.values.size());
    d.edge_graph_id.resize(g.edge_index.values.size());
    for (Index b = 0; b < d.num_graphs; ++b) {
        const Index offset = g.nodes.splits[b];
        for (Index k = g.edge_index.splits[b]; k < g.edge_index.splits[b + 1]; ++k) {
            const Edge& e = g.edge_index.values[static_cast<std::size_t>(k)];
            d.edge_index.push_back({e.receiver + offset, e.sender + offset});
            d.edge_graph_id[static_cast<std::size_t>(k)] = b;
        }
    }
    if (g.edges) d.edge_matrix = g.edges->values;
    if (g.state) d.state = g.state;
    return d;
}

inline GraphBatch from_disjoint(const DisjointBatch& d) {
    // node_graph_id must be blockwise: non-decreasing and covering [0, B).
    std::vector<Index> node_counts(static_cast<std::size_t>(d.num_graphs), 0);
    Index prev = 0;
    for (std::size_t i = 0; i < d.node_graph_id.size(); ++i) {
        Index id = d.node_graph_id[i];
        if (id < 0 || id >= d.num_graphs)
            throw ValidationError("from_disjoint: node_graph_id " + std::to_string(id) +
                                  " out of range");
        if (id < prev) throw ValidationError("from_disjoint: node_graph_id not non-decreasing");
        prev = id;
        ++node_counts[static_cast<std::size_t>(id)];
    }

    GraphBatch g;
    g.nodes.values = d.node_matrix;
    g.nodes.splits = splits_from_counts(node_counts);

    std::vector<Index> edge_counts(static_cast<std::size_t>(d.num_graphs), 0);
    prev = 0;
    for (std::size_t k = 0; k < d.edge_graph_id.size(); ++k) {
        Index id = d.edge_graph_id[k];
        if (id < 0 || id >= d.num_graphs)
            throw ValidationError("from_disjoint: edge_graph_id " + std::to_string(id) +
                                  " out of range");
        if (id < prev) throw ValidationError("from_disjoint: edge_graph_id not non-decreasing");
        prev = id;
        ++edge_counts[static_cast<std::size_t>(id)];
    }
    g.edge_index.splits = splits_from_counts(edge_counts);
    g.edge_index.values.reserve(d.edge_index.size());
    for (std::size_t k = 0; k < d.edge_index.size(); ++k) {
        const Index b = d.edge_graph_id[k];
        const Index offset = g.nodes.splits[b];
        const Edge& e = d.edge_index[k];
        Edge local{e.receiver - offset, e.sender - offset};
        if (local.receiver < 0 || local.receiver >= node_counts[static_cast<std::size_t>(b)] ||
            local.sender < 0 || local.sender >= node_counts[static_cast<std::size_t>(b)])
            throw ValidationError("from_disjoint: edge " + std::to_string(k) +
                                  " crosses its graph block");
        g.edge_index.values.push_back(local);
    }
    if (d.edge_matrix) g.edges = Ragged{*d.edge_matrix, g.edge_index.splits};
    if (d.state) g.state = d.state;
    g.validate();
    return g;
}

} // namespace raggednn
