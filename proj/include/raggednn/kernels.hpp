// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "raggednn/errors.hpp"
#include "raggednn/matrix.hpp"

namespace raggednn {

enum class Reducer { Sum, Mean, Max };

inline const char* reducer_name(Reducer r) {
    switch (r) {
        case Reducer::Sum: return "sum";
        case Reducer::Mean: return "mean";
        case Reducer::Max: return "max";
    }
    return "?";
}

namespace detail {
inline void check_segment_ids(std::span<const Index> ids, Index num_segments, Index num_rows) {
    if (static_cast<Index>(ids.size()) != num_rows)
        throw DimensionError("segment ids length " + std::to_string(ids.size()) +
                             " != row count " + std::to_string(num_rows));
    for (Index r = 0; r < num_rows; ++r)
        if (ids[static_cast<std::size_t>(r)] < 0 || ids[static_cast<std::size_t>(r)] >= num_segments)
            throw ValidationError("segment id " + std::to_string(ids[static_cast<std::size_t>(r)]) +
                                  " at row " + std::to_string(r) + " outside [0," +
                                  std::to_string(num_segments) + ")");
}
} // namespace detail

/// Reduce rows grouped by segment id. Empty segments reduce to the zero
/// vector for every reducer, so max never leaks -inf and mean never
/// divides by zero.
inline Matrix segment_reduce(const Matrix& values, std::span<const Index> segment_ids,
                             Index num_segments, Reducer reducer) {
    detail::check_segment_ids(segment_ids, num_segments, values.rows());
    const Index width = values.cols();
    Matrix out(num_segments, width);
    std::vector<Index> counts(static_cast<std::size_t>(num_segments), 0);

    if (reducer == Reducer::Max) {
        Matrix acc(num_segments, width, -std::numeric_limits<double>::infinity());
        for (Index r = 0; r < values.rows(); ++r) {
            const Index s = segment_ids[static_cast<std::size_t>(r)];
            ++counts[static_cast<std::size_t>(s)];
            for (Index c = 0; c < width; ++c) acc(s, c) = std::max(acc(s, c), values(r, c));
        }
        for (Index s = 0; s < num_segments; ++s)
            if (counts[static_cast<std::size_t>(s)] > 0)
                for (Index c = 0; c < width; ++c) out(s, c) = acc(s, c);
        return out;
    }

    for (Index r = 0; r < values.rows(); ++r) {
        const Index s = segment_ids[static_cast<std::size_t>(r)];
        ++counts[static_cast<std::size_t>(s)];
        double* out_row = out.row(s);
        const double* in_row = values.row(r);
        for (Index c = 0; c < width; ++c) out_row[c] += in_row[c];
    }
    if (reducer == Reducer::Mean) {
        for (Index s = 0; s < num_segments; ++s) {
            const Index n = counts[static_cast<std::size_t>(s)];
            if (n > 0)
                for (Index c = 0; c < width; ++c) out(s, c) /= static_cast<double>(n);
        }
    }
    return out;
}

/// Per-segment, per-column argmax row indices; -1 for empty segments.
/// Ties resolve to the lowest row index. Companion of segment max for
/// gradient routing.
inline std::vector<Index> segment_argmax(const Matrix& values, std::span<const Index> segment_ids,
                                         Index num_segments) {
    detail::check_segment_ids(segment_ids, num_segments, values.rows());
    const Index width = values.cols();
    std::vector<Index> arg(static_cast<std::size_t>(num_segments * width), -1);
    for (Index r = 0; r < values.rows(); ++r) {
        const Index s = segment_ids[static_cast<std::size_t>(r)];
        for (Index c = 0; c < width; ++c) {
            Index& slot = arg[static_cast<std::size_t>(s * width + c)];
            if (slot < 0 || values(r, c) > values(slot, c)) slot = r;
        }
    }
    return arg;
}

/// out[k] = matrix[indices[k]]; duplicates allowed.
inline Matrix gather_rows(const Matrix& matrix, std::span<const Index> indices) {
    Matrix out(static_cast<Index>(indices.size()), matrix.cols());
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const Index r = indices[k];
        if (r < 0 || r >= matrix.rows())
            throw ValidationError("gather_rows: index " + std::to_string(r) + " outside [0," +
                                  std::to_string(matrix.rows()) + ")");
        for (Index c = 0; c < matrix.cols(); ++c) out(static_cast<Index>(k), c) = matrix(r, c);
    }
    return out;
}

/// Adjoint of gather_rows: out[indices[k]] += values[k].
inline Matrix scatter_add_rows(const Matrix& values, std::span<const Index> indices,
                               Index num_rows) {
    Matrix out(num_rows, values.cols());
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const Index r = indices[k];
        if (r < 0 || r >= num_rows)
            throw ValidationError("scatter_add_rows: index " + std::to_string(r) + " outside [0," +
                                  std::to_string(num_rows) + ")");
        for (Index c = 0; c < values.cols(); ++c) out(r, c) += values(static_cast<Index>(k), c);
    }
    return out;
}

} // namespace raggednn
