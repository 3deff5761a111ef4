// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "raggednn/ad/tape.hpp"
#include "raggednn/nn/common.hpp"
#include "raggednn/random.hpp"

namespace raggednn {

/// Outcome of one top-k pooling application. Pooled rows are ordered by
/// descending score within each graph block; `kept` maps pooled row ->
/// original global row and is what unpooling scatters back through.
struct TopKPoolOut {
    ad::NodeId values;                 // gated pooled features
    std::vector<Index> kept;           // pooled row -> original row
    EdgeList edges;                    // surviving edges, pooled indexing
    std::vector<Index> edge_graph_id;  // per surviving edge
    std::vector<Index> node_graph_id;  // per pooled node
    Index num_nodes = 0;
};

/// gPool-style top-k selection: project features onto a learned vector,
/// keep the ceil(k N) best-scoring nodes per graph (ties to the lower
/// index), gate kept features by tanh(score), and drop edges that lose
/// an endpoint.
struct TopKPool {
    ad::Variable projection;  // (F_h, 1)
    double ratio = 0.5;

    TopKPool() = default;
    TopKPool(Index feature_width, double ratio_, Rng& rng)
        : projection(rng.glorot_uniform(feature_width, 1)), ratio(ratio_) {
        if (ratio <= 0.0 || ratio > 1.0) throw ContractError("topk_pool: ratio outside (0,1]");
    }

    static Index keep_count(double ratio, Index n) {
        // guard against fp round-up on exact products like 0.1 * 10
        return std::min<Index>(n, std::max<Index>(1, static_cast<Index>(std::ceil(
                                      ratio * static_cast<double>(n) - 1e-9))));
    }

    TopKPoolOut apply(ad::Tape& t, ad::NodeId h, const std::vector<Index>& node_graph_id,
                      Index num_graphs, const EdgeList& edges,
                      const std::vector<Index>& edge_graph_id) {
        double norm_sq = 0.0;
        for (Index i = 0; i < projection.value.size(); ++i)
            norm_sq += projection.value.data()[i] * projection.value.data()[i];
        if (norm_sq == 0.0) throw ContractError("topk_pool: projection vector has zero norm");

        const Index n = t.value(h).rows();
        ad::NodeId p = t.variable(projection);
        ad::NodeId inv_norm = t.reciprocal(t.sqrt(t.sum_all(t.square(p))));
        ad::NodeId raw = t.matmul(h, p);  // (N,1)
        ad::NodeId scores = t.mul(raw, t.matmul(t.constant(Matrix(n, 1, 1.0)), inv_norm));

        // rank nodes per graph by descending score, ties to the lower index
        const Matrix& y = t.value(scores);
        std::vector<std::vector<Index>> per_graph(static_cast<std::size_t>(num_graphs));
        for (Index i = 0; i < n; ++i)
            per_graph[static_cast<std::size_t>(node_graph_id[static_cast<std::size_t>(i)])]
                .push_back(i);

        TopKPoolOut out;
        std::vector<Index> pooled_pos(static_cast<std::size_t>(n), -1);
        for (Index g = 0; g < num_graphs; ++g) {
            auto& rows = per_graph[static_cast<std::size_t>(g)];
            if (rows.empty())
                throw ContractError("topk_pool: graph " + std::to_string(g) + " has no nodes");
            std::sort(rows.begin(), rows.end(), [&](Index a, Index b) {
                return y(a, 0) != y(b, 0) ? y(a, 0) > y(b, 0) : a < b;
            });
            const Index keep = keep_count(ratio, static_cast<Index>(rows.size()));
            for (Index r = 0; r < keep; ++r) {
                pooled_pos[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])] =
                    static_cast<Index>(out.kept.size());
                out.kept.push_back(rows[static_cast<std::size_t>(r)]);
                out.node_graph_id.push_back(g);
            }
        }
        out.num_nodes = static_cast<Index>(out.kept.size());

        ad::NodeId gate = t.tanh(t.gather_rows(scores, out.kept));
        out.values = t.scale_rows(t.gather_rows(h, out.kept), gate);

        for (std::size_t k = 0; k < edges.size(); ++k) {
            const Index r = pooled_pos[static_cast<std::size_t>(edges[k].receiver)];
            const Index s = pooled_pos[static_cast<std::size_t>(edges[k].sender)];
            if (r >= 0 && s >= 0) {
                out.edges.push_back({r, s});
                out.edge_graph_id.push_back(edge_graph_id[k]);
            }
        }
        return out;
    }

    void collect(const std::string& prefix, std::vector<ParamRef>& out) {
        out.push_back({prefix + ".p", &projection});
    }
};

/// Scatter pooled rows back to their original positions; dropped rows
/// come back zero-filled. With unique targets segment-sum is exactly
/// that scatter.
inline ad::NodeId topk_unpool(ad::Tape& t, ad::NodeId pooled, const std::vector<Index>& kept,
                              Index original_count) {
    if (static_cast<Index>(kept.size()) != t.value(pooled).rows())
        throw ValidationError("topk_unpool: kept map size " + std::to_string(kept.size()) +
                              " != pooled rows " + std::to_string(t.value(pooled).rows()));
    for (Index i : kept)
        if (i < 0 || i >= original_count)
            throw ValidationError("topk_unpool: kept index " + std::to_string(i) +
                                  " outside [0," + std::to_string(original_count) + ")");
    return t.segment_sum(pooled, kept, original_count);
}

} // namespace raggednn
