// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "raggednn/ad/tape.hpp"
#include "raggednn/nn/common.hpp"
#include "raggednn/nn/dense.hpp"

namespace raggednn {

/// m_i = sum over incoming edges k of M(h_i, h_j(k), e_k). Nodes without
/// incoming edges get the zero message (empty-segment rule). With zero
/// edges everything degenerates to empty matrices and the result is all
/// zeros, no special casing.
inline ad::NodeId message_aggregate(ad::Tape& t, ad::NodeId h, const DisjointBatch& d,
                                    std::optional<ad::NodeId> edge_feats, Mlp& message_fn) {
    std::vector<Index> receivers = edge_receivers(d);
    std::vector<Index> senders = edge_senders(d);
    ad::NodeId h_recv = t.gather_rows(h, receivers);
    ad::NodeId h_send = t.gather_rows(h, senders);
    ad::NodeId inputs = edge_feats ? t.concat_cols({h_recv, h_send, *edge_feats})
                                   : t.concat_cols({h_recv, h_send});
    ad::NodeId messages = message_fn.apply(t, inputs);
    return t.segment_sum(messages, std::move(receivers), d.num_nodes());
}

enum class UpdateKind { Mlp, Gru };

/// One message-passing step: h' = U(h, m) where m aggregates M over the
/// neighbourhood. U is an MLP over concat(h, m) or a gated recurrent
/// cell with m as input and h as hidden state.
struct MessagePassingStep {
    Mlp message_fn;      // (2 F_h + F_e) -> F_m
    UpdateKind kind = UpdateKind::Mlp;
    Mlp update_mlp;      // (F_h + F_m) -> F_h
    GruCell update_gru;  // input F_m, hidden F_h

    MessagePassingStep() = default;
    MessagePassingStep(Index node_width, Index edge_width, Index message_width, UpdateKind k,
                       Rng& rng)
        : message_fn(2 * node_width + edge_width, {message_width, message_width},
                     Activation::Relu, Activation::Linear, rng),
          kind(k) {
        if (kind == UpdateKind::Mlp)
            update_mlp = Mlp(node_width + message_width, {node_width, node_width},
                             Activation::Relu, Activation::Linear, rng);
        else
            update_gru = GruCell(message_width, node_width, rng);
    }

    ad::NodeId apply(ad::Tape& t, ad::NodeId h, const DisjointBatch& d,
                     std::optional<ad::NodeId> edge_feats) {
        ad::NodeId m = message_aggregate(t, h, d, edge_feats, message_fn);
        if (kind == UpdateKind::Mlp) return update_mlp.apply(t, t.concat_cols({h, m}));
        return update_gru.step(t, m, h);
    }

    void collect(const std::string& prefix, std::vector<ParamRef>& out) {
        message_fn.collect(prefix + ".message", out);
        if (kind == UpdateKind::Mlp)
            update_mlp.collect(prefix + ".update", out);
        else
            update_gru.collect(prefix + ".update", out);
    }
};

/// T-step message passing; one parameter set shared across steps or one
/// per step.
struct MessagePassing {
    Index steps = 1;
    bool shared_weights = true;
    std::vector<MessagePassingStep> blocks;  // size 1 if shared, else `steps`

    MessagePassing() = default;
    MessagePassing(Index node_width, Index edge_width, Index message_width, Index steps_,
                   bool shared, UpdateKind kind, Rng& rng)
        : steps(steps_), shared_weights(shared) {
        if (steps < 1) throw ContractError("message passing: steps must be >= 1");
        const Index copies = shared ? 1 : steps;
        for (Index i = 0; i < copies; ++i)
            blocks.emplace_back(node_width, edge_width, message_width, kind, rng);
    }

    ad::NodeId step(ad::Tape& t, ad::NodeId h, const DisjointBatch& d,
                    std::optional<ad::NodeId> edge_feats, Index step_index) {
        if (step_index < 0 || step_index >= steps)
            throw ContractError("message passing: step " + std::to_string(step_index) +
                                " outside [0," + std::to_string(steps) + ")");
        return blocks[static_cast<std::size_t>(shared_weights ? 0 : step_index)].apply(
            t, h, d, edge_feats);
    }

    ad::NodeId run(ad::Tape& t, ad::NodeId h, const DisjointBatch& d,
                   std::optional<ad::NodeId> edge_feats) {
        for (Index i = 0; i < steps; ++i) h = step(t, h, d, edge_feats, i);
        return h;
    }

    void collect(const std::string& prefix, std::vector<ParamRef>& out) {
        for (std::size_t i = 0; i < blocks.size(); ++i)
            blocks[i].collect(prefix + ".step" + std::to_string(i), out);
    }
};

} // namespace raggednn
