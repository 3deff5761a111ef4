// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "raggednn/ad/tape.hpp"
#include "raggednn/nn/common.hpp"
#include "raggednn/nn/dense.hpp"

namespace raggednn {

/// Interaction-network block: per-edge relation update followed by a
/// per-node object update over the summed incoming relations.
///   e'_k = phi_R(h_i, h_j, e_k)
///   h'_i = phi_O(h_i, sum_{k -> i} e'_k)
struct InteractionBlock {
    Mlp relation_fn;  // (2 F_h + F_e) -> F_e'
    Mlp object_fn;    // (F_h + F_e') -> F_h

    InteractionBlock() = default;
    InteractionBlock(Index node_width, Index edge_width, Index relation_width, Rng& rng)
        : relation_fn(2 * node_width + edge_width, {relation_width, relation_width},
                      Activation::Relu, Activation::Linear, rng),
          object_fn(node_width + relation_width, {node_width, node_width}, Activation::Relu,
                    Activation::Linear, rng) {}

    struct Out {
        ad::NodeId edges;
        ad::NodeId nodes;
    };

    Out apply(ad::Tape& t, ad::NodeId h, ad::NodeId edge_feats, const DisjointBatch& d) {
        std::vector<Index> receivers = edge_receivers(d);
        ad::NodeId h_recv = t.gather_rows(h, receivers);
        ad::NodeId h_send = t.gather_rows(h, edge_senders(d));
        ad::NodeId relations =
            relation_fn.apply(t, t.concat_cols({h_recv, h_send, edge_feats}));
        ad::NodeId aggregated = t.segment_sum(relations, std::move(receivers), d.num_nodes());
        ad::NodeId nodes = object_fn.apply(t, t.concat_cols({h, aggregated}));
        return {relations, nodes};
    }

    void collect(const std::string& prefix, std::vector<ParamRef>& out) {
        relation_fn.collect(prefix + ".relation", out);
        object_fn.collect(prefix + ".object", out);
    }
};

} // namespace raggednn
