// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "raggednn/ad/tape.hpp"
#include "raggednn/graph.hpp"

namespace raggednn {

/// Named handle onto a trainable parameter; the unit the optimizer and
/// checkpoint code iterate over.
struct ParamRef {
    std::string name;
    ad::Variable* var = nullptr;
};

/// Tape-resident ragged node features: the hidden representation h_v
/// living as one flat (N_total, F) node on the tape, partitioned per
/// graph by row splits that mirror the originating batch.
struct NodeState {
    ad::NodeId values;
    RowSplits splits;
};

inline std::vector<Index> edge_receivers(const DisjointBatch& d) {
    std::vector<Index> out;
    out.reserve(d.edge_index.size());
    for (const Edge& e : d.edge_index) out.push_back(e.receiver);
    return out;
}

inline std::vector<Index> edge_senders(const DisjointBatch& d) {
    std::vector<Index> out;
    out.reserve(d.edge_index.size());
    for (const Edge& e : d.edge_index) out.push_back(e.sender);
    return out;
}

} // namespace raggednn
