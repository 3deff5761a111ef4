// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "raggednn/ad/tape.hpp"
#include "raggednn/nn/common.hpp"
#include "raggednn/nn/dense.hpp"

namespace raggednn {

/// Full graph-network block updating edges, nodes, and the per-graph
/// state vector, all with mean aggregation:
///   e'_k = phi_e(h_i, h_j, e_k, u_g)
///   h'_i = phi_v(mean_{k->i} e', h_i, u_g)
///   u'_g = phi_u(mean_g e', mean_g h', u_g)
struct MegnetBlock {
    Mlp edge_fn;   // (2 F_h + F_e + F_u) -> F_e
    Mlp node_fn;   // (F_e + F_h + F_u) -> F_h
    Mlp state_fn;  // (F_e + F_h + F_u) -> F_u

    MegnetBlock() = default;
    MegnetBlock(Index node_width, Index edge_width, Index state_width, Rng& rng)
        : edge_fn(2 * node_width + edge_width + state_width, {edge_width, edge_width},
                  Activation::Relu, Activation::Linear, rng),
          node_fn(edge_width + node_width + state_width, {node_width, node_width},
                  Activation::Relu, Activation::Linear, rng),
          state_fn(edge_width + node_width + state_width, {state_width, state_width},
                   Activation::Relu, Activation::Linear, rng) {}

    struct Out {
        ad::NodeId edges;
        ad::NodeId nodes;
        ad::NodeId state;
    };

    Out apply(ad::Tape& t, ad::NodeId h, ad::NodeId edge_feats, ad::NodeId state,
              const DisjointBatch& d) {
        std::vector<Index> receivers = edge_receivers(d);
        ad::NodeId u_per_edge = t.gather_rows(state, d.edge_graph_id);
        ad::NodeId u_per_node = t.gather_rows(state, d.node_graph_id);

        ad::NodeId edges = edge_fn.apply(
            t, t.concat_cols({t.gather_rows(h, receivers), t.gather_rows(h, edge_senders(d)),
                              edge_feats, u_per_edge}));

        ad::NodeId incoming_mean = t.segment_mean(edges, std::move(receivers), d.num_nodes());
        ad::NodeId nodes = node_fn.apply(t, t.concat_cols({incoming_mean, h, u_per_node}));

        ad::NodeId edge_mean = t.segment_mean(edges, d.edge_graph_id, d.num_graphs);
        ad::NodeId node_mean = t.segment_mean(nodes, d.node_graph_id, d.num_graphs);
        ad::NodeId new_state = state_fn.apply(t, t.concat_cols({edge_mean, node_mean, state}));
        return {edges, nodes, new_state};
    }

    void collect(const std::string& prefix, std::vector<ParamRef>& out) {
        edge_fn.collect(prefix + ".edge", out);
        node_fn.collect(prefix + ".node", out);
        state_fn.collect(prefix + ".state", out);
    }
};

} // namespace raggednn
