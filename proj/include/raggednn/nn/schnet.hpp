// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "raggednn/ad/tape.hpp"
#include "raggednn/nn/common.hpp"
#include "raggednn/nn/dense.hpp"

namespace raggednn {

/// Radial basis expansion: out[n,k] = exp(-gamma (d_n - mu_k)^2).
inline Matrix gaussian_basis(const std::vector<double>& distances,
                             const std::vector<double>& centers, double gamma) {
    if (gamma <= 0.0) throw ContractError("gaussian_basis: gamma must be positive");
    Matrix out(static_cast<Index>(distances.size()), static_cast<Index>(centers.size()));
    for (std::size_t n = 0; n < distances.size(); ++n)
        for (std::size_t k = 0; k < centers.size(); ++k) {
            const double delta = distances[n] - centers[k];
            out(static_cast<Index>(n), static_cast<Index>(k)) = std::exp(-gamma * delta * delta);
        }
    return out;
}

/// Evenly spaced basis centers on [0, r_max].
inline std::vector<double> basis_centers(Index count, double r_max) {
    std::vector<double> mu(static_cast<std::size_t>(count));
    for (Index k = 0; k < count; ++k)
        mu[static_cast<std::size_t>(k)] =
            count > 1 ? r_max * static_cast<double>(k) / static_cast<double>(count - 1) : 0.0;
    return mu;
}

/// Continuous-filter convolution block with residual update:
///   x_i <- x_i + MLP( sum_j (W_in x_j) * W_filter(e_ij) )
/// Edge features are gaussian-basis expanded distances; activations are
/// shifted softplus throughout.
struct SchnetInteraction {
    DenseLayer embed_in;  // F_h -> F_h, linear
    Mlp filter_fn;        // K  -> F_h, two layers
    Mlp atomwise;         // F_h -> F_h

    SchnetInteraction() = default;
    SchnetInteraction(Index node_width, Index basis_width, Rng& rng)
        : embed_in(node_width, node_width, Activation::Linear, rng),
          filter_fn(basis_width, {node_width, node_width}, Activation::ShiftedSoftplus,
                    Activation::ShiftedSoftplus, rng),
          atomwise(node_width, {node_width, node_width}, Activation::ShiftedSoftplus,
                   Activation::Linear, rng) {}

    ad::NodeId apply(ad::Tape& t, ad::NodeId x, ad::NodeId edge_feats, const DisjointBatch& d) {
        if (t.value(x).cols() != embed_in.in_width())
            throw DimensionError("schnet interaction: node width " +
                                 std::to_string(t.value(x).cols()) + " != " +
                                 std::to_string(embed_in.in_width()));
        std::vector<Index> receivers = edge_receivers(d);
        ad::NodeId sent = t.gather_rows(embed_in.apply(t, x), edge_senders(d));
        ad::NodeId filters = filter_fn.apply(t, edge_feats);
        ad::NodeId messages = t.mul(sent, filters);
        ad::NodeId aggregated = t.segment_sum(messages, std::move(receivers), d.num_nodes());
        return t.add(x, atomwise.apply(t, aggregated));
    }

    void collect(const std::string& prefix, std::vector<ParamRef>& out) {
        embed_in.collect(prefix + ".embed_in", out);
        filter_fn.collect(prefix + ".filter", out);
        atomwise.collect(prefix + ".atomwise", out);
    }
};

} // namespace raggednn
