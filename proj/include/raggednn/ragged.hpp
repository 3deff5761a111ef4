// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "raggednn/errors.hpp"
#include "raggednn/matrix.hpp"

namespace raggednn {

/// Row-partition offsets of a ragged batch: length B+1, starts at 0,
/// non-decreasing, ends at the total row count.
using RowSplits = std::vector<Index>;

inline void validate_row_splits(const RowSplits& splits, Index total_rows) {
    if (splits.empty()) throw ValidationError("row_splits: must have length >= 1");
    if (splits.front() != 0) throw ValidationError("row_splits: first entry must be 0");
    for (std::size_t i = 1; i < splits.size(); ++i)
        if (splits[i] < splits[i - 1])
            throw ValidationError("row_splits: not non-decreasing at position " + std::to_string(i));
    if (splits.back() != total_rows)
        throw ValidationError("row_splits: last entry " + std::to_string(splits.back()) +
                              " != total rows " + std::to_string(total_rows));
}

inline RowSplits splits_from_counts(const std::vector<Index>& counts) {
    RowSplits splits(counts.size() + 1, 0);
    for (std::size_t i = 0; i < counts.size(); ++i) splits[i + 1] = splits[i] + counts[i];
    return splits;
}

/// Batch of variable-length row blocks: one flat (total_rows, F) value
/// buffer plus row-partition offsets. The second dimension is flexible
/// per batch entry; F is uniform.
struct Ragged {
    Matrix values;
    RowSplits splits{0};

    Index batch_size() const { return static_cast<Index>(splits.size()) - 1; }
    Index row_count(Index b) const { return splits[b + 1] - splits[b]; }
    Index total_rows() const { return values.rows(); }
    Index width() const { return values.cols(); }

    void validate() const { validate_row_splits(splits, values.rows()); }

    friend bool operator==(const Ragged& a, const Ragged& b) {
        return a.values == b.values && a.splits == b.splits;
    }
};

/// Directed edge: column 0 is the receiving node i, column 1 the sending
/// node j. Messages flow j -> i throughout the library.
struct Edge {
    Index receiver = 0;
    Index sender = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

using EdgeList = std::vector<Edge>;

/// Ragged batch of edge-index pairs, one block of (receiver, sender)
/// rows per graph. Indices are graph-local.
struct RaggedEdges {
    EdgeList values;
    RowSplits splits{0};

    Index batch_size() const { return static_cast<Index>(splits.size()) - 1; }
    Index row_count(Index b) const { return splits[b + 1] - splits[b]; }
    Index total_rows() const { return static_cast<Index>(values.size()); }

    void validate() const { validate_row_splits(splits, total_rows()); }

    friend bool operator==(const RaggedEdges& a, const RaggedEdges& b) = default;
};

/// Concatenate per-graph row blocks into one Ragged batch. Empty blocks
/// are allowed; with zero rows overall the width collapses to 0.
inline Ragged ragged_from_rows(const std::vector<Matrix>& rows) {
    Index width = 0;
    Index total = 0;
    for (const auto& m : rows) {
        if (m.rows() > 0) {
            if (width == 0)
                width = m.cols();
            else if (m.cols() != width)
                throw DimensionError("ragged_from_rows: inner width " + std::to_string(m.cols()) +
                                     " != " + std::to_string(width));
        }
        total += m.rows();
    }
    Ragged out;
    out.values = Matrix(total, width);
    out.splits.assign(1, 0);
    Index at = 0;
    for (const auto& m : rows) {
        for (Index r = 0; r < m.rows(); ++r, ++at)
            for (Index c = 0; c < width; ++c) out.values(at, c) = m(r, c);
        out.splits.push_back(at);
    }
    return out;
}

/// Fixed-size view of a ragged batch: (B, N_max, F) dense buffer plus a
/// boolean mask marking the live rows.
struct PaddedBatch {
    Index batch = 0;
    Index max_rows = 0;
    Index width = 0;
    std::vector<double> dense;  // batch * max_rows * width, row-major
    std::vector<std::uint8_t> mask;  // batch * max_rows

    double& at(Index b, Index r, Index c) { return dense[((b * max_rows) + r) * width + c]; }
    double at(Index b, Index r, Index c) const { return dense[((b * max_rows) + r) * width + c]; }
    bool valid(Index b, Index r) const { return mask[b * max_rows + r] != 0; }
};

inline PaddedBatch to_padded(const Ragged& r, double pad_value) {
    r.validate();
    PaddedBatch p;
    p.batch = r.batch_size();
    p.width = r.width();
    for (Index b = 0; b < p.batch; ++b) p.max_rows = std::max(p.max_rows, r.row_count(b));
    p.dense.assign(static_cast<std::size_t>(p.batch * p.max_rows * p.width), pad_value);
    p.mask.assign(static_cast<std::size_t>(p.batch * p.max_rows), 0);
    for (Index b = 0; b < p.batch; ++b) {
        for (Index i = 0; i < r.row_count(b); ++i) {
            p.mask[b * p.max_rows + i] = 1;
            for (Index c = 0; c < p.width; ++c) p.at(b, i, c) = r.values(r.splits[b] + i, c);
        }
    }
    return p;
}

inline Ragged from_padded(const PaddedBatch& p) {
    std::vector<Index> counts(p.batch, 0);
    Index total = 0;
    for (Index b = 0; b < p.batch; ++b) {
        Index count = 0;
        while (count < p.max_rows && p.valid(b, count)) ++count;
        for (Index i = count; i < p.max_rows; ++i)
            if (p.valid(b, i))
                throw ValidationError("from_padded: mask of batch entry " + std::to_string(b) +
                                      " is not a prefix");
        counts[b] = count;
        total += count;
    }
    Ragged out;
    out.values = Matrix(total, p.width);
    out.splits = splits_from_counts(counts);
    Index at = 0;
    for (Index b = 0; b < p.batch; ++b)
        for (Index i = 0; i < counts[b]; ++i, ++at)
            for (Index c = 0; c < p.width; ++c) out.values(at, c) = p.at(b, i, c);
    return out;
}

} // namespace raggednn
