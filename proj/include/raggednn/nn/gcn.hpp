// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "raggednn/ad/tape.hpp"
#include "raggednn/adjacency.hpp"
#include "raggednn/nn/dense.hpp"

namespace raggednn {

/// Renormalized adjacency D^{-1/2} (A + I) D^{-1/2}: add self-loops, then
/// scale entry (i,j) by the inverse square roots of the post-self-loop
/// degrees. Input must be an unnormalized 0/1 adjacency without
/// self-loops.
inline AdjacencyCsr gcn_normalize(const AdjacencyCsr& a) {
    const Index n = a.num_rows();
    for (double v : a.values)
        if (v != 1.0) throw ContractError("gcn_normalize: adjacency entries must be 0/1");

    AdjacencyCsr out;
    out.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    out.col_idx.reserve(a.col_idx.size() + static_cast<std::size_t>(n));
    out.values.reserve(a.col_idx.size() + static_cast<std::size_t>(n));

    std::vector<double> degree(static_cast<std::size_t>(n), 0.0);
    for (Index i = 0; i < n; ++i)
        degree[static_cast<std::size_t>(i)] =
            1.0 + static_cast<double>(a.row_ptr[static_cast<std::size_t>(i) + 1] -
                                      a.row_ptr[static_cast<std::size_t>(i)]);

    for (Index i = 0; i < n; ++i) {
        bool inserted_diag = false;
        for (Index k = a.row_ptr[static_cast<std::size_t>(i)];
             k < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
            const Index j = a.col_idx[static_cast<std::size_t>(k)];
            if (j == i)
                throw ValidationError("gcn_normalize: node " + std::to_string(i) +
                                      " already has a self-loop");
            if (!inserted_diag && j > i) {
                out.col_idx.push_back(i);
                inserted_diag = true;
            }
            out.col_idx.push_back(j);
        }
        if (!inserted_diag) out.col_idx.push_back(i);
        out.row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<Index>(out.col_idx.size());
    }
    for (Index i = 0; i < n; ++i) {
        const double di = degree[static_cast<std::size_t>(i)];
        for (Index k = out.row_ptr[static_cast<std::size_t>(i)];
             k < out.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
            const Index j = out.col_idx[static_cast<std::size_t>(k)];
            out.values.push_back(1.0 / std::sqrt(di * degree[static_cast<std::size_t>(j)]));
        }
    }
    return out;
}

/// activation(A_hat h W + b), with the sparse product run through
/// gather / row-scale / segment-sum kernels rather than a dense matmul
/// on A_hat.
inline ad::NodeId gcn_conv(ad::Tape& t, ad::NodeId h, const CsrEdges& a_norm, Index num_nodes,
                           DenseLayer& layer) {
    ad::NodeId z = t.matmul(h, t.variable(layer.weight));
    ad::NodeId sent = t.gather_rows(z, a_norm.senders);
    Matrix w(static_cast<Index>(a_norm.weights.size()), 1);
    for (std::size_t k = 0; k < a_norm.weights.size(); ++k)
        w(static_cast<Index>(k), 0) = a_norm.weights[k];
    ad::NodeId weighted = t.scale_rows(sent, t.constant(std::move(w)));
    ad::NodeId mixed = t.segment_sum(weighted, a_norm.receivers, num_nodes);
    return apply_activation(t, t.add_bias(mixed, t.variable(layer.bias)), layer.activation);
}

} // namespace raggednn
