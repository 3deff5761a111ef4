// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "raggednn/data/dataset.hpp"
#include "raggednn/random.hpp"

namespace raggednn {

/// Two-community stochastic block graph with noisy block-indicator node
/// features; the standard sanity benchmark for semi-supervised node
/// classification.
inline GraphRecord two_block_graph(Index num_nodes, double within_p, double cross_p,
                                   Index feature_dim, double noise_sigma, std::uint64_t seed) {
    Rng rng(seed);
    GraphRecord rec;
    rec.id = "two-block-sbm";
    rec.node_features = Matrix(num_nodes, feature_dim);
    std::vector<int> labels(static_cast<std::size_t>(num_nodes));
    const Index half = num_nodes / 2;
    for (Index i = 0; i < num_nodes; ++i) {
        const int block = i < half ? 0 : 1;
        labels[static_cast<std::size_t>(i)] = block;
        for (Index c = 0; c < feature_dim; ++c) {
            const double mean = (c % 2 == block) ? 1.0 : 0.0;
            rec.node_features(i, c) = mean + noise_sigma * rng.normal();
        }
    }
    rec.node_labels = std::move(labels);
    for (Index i = 0; i < num_nodes; ++i)
        for (Index j = i + 1; j < num_nodes; ++j) {
            const bool same = (i < half) == (j < half);
            if (rng.bernoulli(same ? within_p : cross_p)) {
                rec.edge_index.push_back({i, j});
                rec.edge_index.push_back({j, i});
            }
        }
    rec.validate();
    return rec;
}

/// Synthetic molecule-like point clouds with three smooth geometry- and
/// composition-dependent regression targets (named homo/lumo/gap by the
/// training configs). Atom features are a one-hot over four types;
/// connectivity is left to distance expansion.
inline std::vector<GraphRecord> molecule_cloud_dataset(Index count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<GraphRecord> records;
    records.reserve(static_cast<std::size_t>(count));
    const double type_weight_a[4] = {0.8, -0.5, 0.3, -0.2};
    const double type_weight_b[4] = {-0.3, 0.6, -0.4, 0.2};

    for (Index m = 0; m < count; ++m) {
        const Index atoms = 4 + rng.uniform_index(9);  // 4..12
        GraphRecord rec;
        rec.id = "mol" + std::to_string(m);
        rec.node_features = Matrix(atoms, 4);
        Matrix pos(atoms, 3);
        std::vector<int> types(static_cast<std::size_t>(atoms));
        for (Index i = 0; i < atoms; ++i) {
            const int type = static_cast<int>(rng.uniform_index(4));
            types[static_cast<std::size_t>(i)] = type;
            rec.node_features(i, type) = 1.0;
            // rejection-sample positions so atoms keep a minimum spacing
            for (int tries = 0; tries < 64; ++tries) {
                for (Index c = 0; c < 3; ++c) pos(i, c) = rng.uniform(-1.8, 1.8);
                double min_d2 = 1e30;
                for (Index j = 0; j < i; ++j) {
                    double d2 = 0.0;
                    for (Index c = 0; c < 3; ++c) {
                        const double delta = pos(i, c) - pos(j, c);
                        d2 += delta * delta;
                    }
                    min_d2 = std::min(min_d2, d2);
                }
                if (min_d2 > 0.8 * 0.8) break;
            }
        }
        rec.positions = pos;

        // smooth targets: composition terms plus a short-range pair term
        double comp_a = 0.0, comp_b = 0.0, pair_term = 0.0;
        for (Index i = 0; i < atoms; ++i) {
            comp_a += type_weight_a[types[static_cast<std::size_t>(i)]];
            comp_b += type_weight_b[types[static_cast<std::size_t>(i)]];
        }
        for (Index i = 0; i < atoms; ++i)
            for (Index j = i + 1; j < atoms; ++j) {
                double d2 = 0.0;
                for (Index c = 0; c < 3; ++c) {
                    const double delta = pos(i, c) - pos(j, c);
                    d2 += delta * delta;
                }
                pair_term += std::exp(-std::sqrt(d2));
            }
        const double n = static_cast<double>(atoms);
        const double homo = -6.5 + 0.4 * comp_a / std::sqrt(n) + 1.2 * pair_term / n;
        const double lumo = -1.2 + 0.5 * comp_b / std::sqrt(n) - 0.8 * pair_term / n;
        rec.targets = std::vector<double>{homo, lumo, lumo - homo};
        records.push_back(std::move(rec));
    }
    return records;
}

/// Small binary-labeled molecular graphs in the MUTAG mold: carbon rings
/// with substituents, one-hot atom types over seven elements, label 1
/// iff a nitro-like motif (type-1 atom bonded to two type-2 atoms) is
/// present.
inline std::vector<GraphRecord> mutag_like_dataset(Index count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<GraphRecord> records;
    for (Index m = 0; m < count; ++m) {
        const bool positive = m % 2 == 0;
        const Index ring = 5 + rng.uniform_index(3);  // 5..7 ring atoms
        std::vector<int> types(static_cast<std::size_t>(ring), 0);
        EdgeList edges;
        for (Index i = 0; i < ring; ++i) {
            const Index j = (i + 1) % ring;
            edges.push_back({i, j});
            edges.push_back({j, i});
        }
        auto add_atom = [&](int type, Index attach_to) {
            const Index id = static_cast<Index>(types.size());
            types.push_back(type);
            edges.push_back({id, attach_to});
            edges.push_back({attach_to, id});
            return id;
        };
        // a couple of benign substituents (types 3..6, never 1)
        const Index extras = 1 + rng.uniform_index(3);
        for (Index s = 0; s < extras; ++s)
            add_atom(3 + static_cast<int>(rng.uniform_index(4)), rng.uniform_index(ring));
        if (positive) {
            const Index nitro = add_atom(1, rng.uniform_index(ring));
            add_atom(2, nitro);
            add_atom(2, nitro);
        }

        GraphRecord rec;
        rec.id = "mutag" + std::to_string(m);
        rec.node_features = Matrix(static_cast<Index>(types.size()), 7);
        for (std::size_t i = 0; i < types.size(); ++i)
            rec.node_features(static_cast<Index>(i), types[i]) = 1.0;
        rec.edge_index = std::move(edges);
        rec.label = positive ? 1 : 0;
        rec.validate();
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace raggednn
