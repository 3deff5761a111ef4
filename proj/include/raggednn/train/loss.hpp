// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "raggednn/ad/tape.hpp"
#include "raggednn/task.hpp"

namespace raggednn {

enum class LossKind { Mae, Mse, SoftmaxCe };

inline LossKind loss_from_string(const std::string& s) {
    if (s == "mae") return LossKind::Mae;
    if (s == "mse") return LossKind::Mse;
    if (s == "softmax_ce") return LossKind::SoftmaxCe;
    throw ConfigError("loss: unknown kind '" + s + "' (mae|mse|softmax_ce)");
}

inline std::string loss_to_string(LossKind k) {
    switch (k) {
        case LossKind::Mae: return "mae";
        case LossKind::Mse: return "mse";
        case LossKind::SoftmaxCe: return "softmax_ce";
    }
    return "?";
}

inline LossKind default_loss(Task task) {
    return is_graph_task(task) && task == Task::GraphRegression ? LossKind::Mae
                                                                : LossKind::SoftmaxCe;
}

/// Regression losses: mean over all prediction entries. The mae
/// subgradient at zero residual is zero (from the abs rule).
inline ad::NodeId compute_loss(ad::Tape& t, LossKind kind, ad::NodeId pred,
                               const Matrix& targets) {
    if (kind == LossKind::SoftmaxCe)
        throw ContractError("compute_loss: softmax_ce needs integer labels");
    ad::NodeId residual = t.sub(pred, t.constant(targets));
    if (kind == LossKind::Mae) return t.mean_all(t.abs(residual));
    return t.mean_all(t.square(residual));
}

/// Classification loss: mean softmax cross entropy over rows.
inline ad::NodeId compute_loss(ad::Tape& t, LossKind kind, ad::NodeId logits,
                               const std::vector<int>& labels) {
    if (kind != LossKind::SoftmaxCe)
        throw ContractError("compute_loss: " + loss_to_string(kind) + " needs real targets");
    return t.softmax_cross_entropy(logits, labels);
}

inline Index argmax_row(const Matrix& m, Index row) {
    Index best = 0;
    for (Index c = 1; c < m.cols(); ++c)
        if (m(row, c) > m(row, best)) best = c;
    return best;
}

/// Fraction of rows whose argmax matches the label.
inline double accuracy(const Matrix& logits, const std::vector<int>& labels) {
    if (logits.rows() == 0) return 0.0;
    Index hits = 0;
    for (Index r = 0; r < logits.rows(); ++r)
        if (argmax_row(logits, r) == labels[static_cast<std::size_t>(r)]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(logits.rows());
}

/// Per-column mean absolute error; one entry per regression target.
inline std::vector<double> mae_per_target(const Matrix& pred, const Matrix& targets) {
    detail::require_same_shape(pred, targets, "mae_per_target");
    std::vector<double> out(static_cast<std::size_t>(pred.cols()), 0.0);
    for (Index r = 0; r < pred.rows(); ++r)
        for (Index c = 0; c < pred.cols(); ++c)
            out[static_cast<std::size_t>(c)] += std::abs(pred(r, c) - targets(r, c));
    if (pred.rows() > 0)
        for (double& v : out) v /= static_cast<double>(pred.rows());
    return out;
}

} // namespace raggednn
