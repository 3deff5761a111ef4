// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "raggednn/ad/tape.hpp"
#include "raggednn/kernels.hpp"
#include "raggednn/nn/common.hpp"
#include "raggednn/nn/dense.hpp"

namespace raggednn {

/// Per-graph reduction of node (or edge) rows: the simple average / sum /
/// max readout.
inline ad::NodeId readout_reduce(ad::Tape& t, ad::NodeId values,
                                 const std::vector<Index>& graph_ids, Index num_graphs,
                                 Reducer reducer) {
    switch (reducer) {
        case Reducer::Sum: return t.segment_sum(values, graph_ids, num_graphs);
        case Reducer::Mean: return t.segment_mean(values, graph_ids, num_graphs);
        case Reducer::Max: return t.segment_max(values, graph_ids, num_graphs);
    }
    throw ConfigError("unhandled reducer");
}

/// Attention readout over node sets: iterate a recurrent query, take a
/// per-graph softmax over node scores, and accumulate the weighted sum.
/// Output is concat(q_T, r_T) of width 2 F_h; invariant to node order
/// within each graph.
struct Set2Set {
    Index steps = 3;
    GruCell cell;  // input F_h (r), hidden F_h (q)

    Set2Set() = default;
    Set2Set(Index feature_width, Index steps_, Rng& rng)
        : steps(steps_), cell(feature_width, feature_width, rng) {
        if (steps < 1) throw ContractError("set2set: steps must be >= 1");
    }

    Index out_width() const { return 2 * cell.hidden_width(); }

    ad::NodeId apply(ad::Tape& t, ad::NodeId h, const std::vector<Index>& graph_ids,
                     Index num_graphs) {
        using ad::NodeId;
        const Index width = t.value(h).cols();
        if (width != cell.hidden_width())
            throw DimensionError("set2set: feature width " + std::to_string(width) + " != " +
                                 std::to_string(cell.hidden_width()));
        NodeId query = t.constant(Matrix(num_graphs, width));
        NodeId readout = t.constant(Matrix(num_graphs, width));
        NodeId ones = t.constant(Matrix(width, 1, 1.0));
        for (Index step = 0; step < steps; ++step) {
            query = cell.step(t, readout, query);
            // per-node score = <h_i, q_{graph(i)}>
            NodeId scores = t.matmul(t.mul(h, t.gather_rows(query, graph_ids)), ones);
            NodeId attention = t.segment_softmax(scores, graph_ids, num_graphs);
            readout = t.segment_sum(t.scale_rows(h, attention), graph_ids, num_graphs);
        }
        return t.concat_cols({query, readout});
    }

    void collect(const std::string& prefix, std::vector<ParamRef>& out) {
        cell.collect(prefix + ".cell", out);
    }
};

} // namespace raggednn
