// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "raggednn/errors.hpp"
#include "raggednn/graph.hpp"

namespace raggednn {

/// Sparse adjacency in CSR form. Row = receiver, column = sender, so
/// A x aggregates sender features at each receiver. Column indices are
/// strictly increasing within a row; no duplicate entries.
struct AdjacencyCsr {
    std::vector<Index> row_ptr;   // N+1
    std::vector<Index> col_idx;   // nnz
    std::vector<double> values;   // nnz

    Index num_rows() const { return static_cast<Index>(row_ptr.size()) - 1; }
    Index nnz() const { return static_cast<Index>(col_idx.size()); }

    void validate() const {
        const Index n = num_rows();
        if (row_ptr.empty() || row_ptr.front() != 0 || row_ptr.back() != nnz())
            throw ValidationError("AdjacencyCsr: bad row_ptr bounds");
        for (Index i = 0; i < n; ++i) {
            if (row_ptr[i + 1] < row_ptr[i]) throw ValidationError("AdjacencyCsr: row_ptr decreasing");
            for (Index k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
                if (col_idx[k] < 0 || col_idx[k] >= n)
                    throw ValidationError("AdjacencyCsr: column out of range");
                if (k > row_ptr[i] && col_idx[k] <= col_idx[k - 1])
                    throw ValidationError("AdjacencyCsr: columns not strictly increasing in row " +
                                          std::to_string(i));
            }
        }
    }
};

/// Build A with A[receiver, sender] set to the edge value (1.0 by
/// default). Duplicate (i,j) pairs are rejected here; message passing
/// tolerates them, adjacency semantics do not.
inline AdjacencyCsr adjacency_from_edge_list(const EdgeList& edges, Index n,
                                             const std::vector<double>* edge_values = nullptr) {
    const Index m = static_cast<Index>(edges.size());
    if (edge_values && static_cast<Index>(edge_values->size()) != m)
        throw DimensionError("adjacency_from_edges: edge value count != edge count");

    std::vector<Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        const Edge& ea = edges[static_cast<std::size_t>(a)];
        const Edge& eb = edges[static_cast<std::size_t>(b)];
        return ea.receiver != eb.receiver ? ea.receiver < eb.receiver : ea.sender < eb.sender;
    });

    AdjacencyCsr a;
    a.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    a.col_idx.reserve(static_cast<std::size_t>(m));
    a.values.reserve(static_cast<std::size_t>(m));
    for (Index k = 0; k < m; ++k) {
        const Edge& e = edges[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
        if (e.receiver < 0 || e.receiver >= n || e.sender < 0 || e.sender >= n)
            throw ValidationError("adjacency_from_edges: edge endpoint out of range");
        if (k > 0) {
            const Edge& prev =
                edges[static_cast<std::size_t>(order[static_cast<std::size_t>(k - 1)])];
            if (prev.receiver == e.receiver && prev.sender == e.sender)
                throw ValidationError("adjacency_from_edges: duplicate edge (" +
                                      std::to_string(e.receiver) + "," + std::to_string(e.sender) +
                                      ")");
        }
        ++a.row_ptr[static_cast<std::size_t>(e.receiver) + 1];
        a.col_idx.push_back(e.sender);
        a.values.push_back(edge_values ? (*edge_values)[static_cast<std::size_t>(
                                             order[static_cast<std::size_t>(k)])]
                                       : 1.0);
    }
    for (Index i = 0; i < n; ++i) a.row_ptr[static_cast<std::size_t>(i) + 1] += a.row_ptr[static_cast<std::size_t>(i)];
    return a;
}

inline AdjacencyCsr adjacency_from_edges(const DisjointBatch& d,
                                         const std::vector<double>* edge_values = nullptr) {
    return adjacency_from_edge_list(d.edge_index, d.num_nodes(), edge_values);
}

/// Flatten CSR into parallel (receiver, sender, value) arrays. The layer
/// code drives gather/segment kernels with these instead of multiplying
/// by A densely.
struct CsrEdges {
    std::vector<Index> receivers;
    std::vector<Index> senders;
    std::vector<double> weights;
};

inline CsrEdges csr_to_edges(const AdjacencyCsr& a) {
    CsrEdges e;
    e.receivers.reserve(static_cast<std::size_t>(a.nnz()));
    e.senders = a.col_idx;
    e.weights = a.values;
    for (Index i = 0; i < a.num_rows(); ++i)
        for (Index k = a.row_ptr[static_cast<std::size_t>(i)];
             k < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
            e.receivers.push_back(i);
    return e;
}

} // namespace raggednn
