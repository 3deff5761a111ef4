// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "raggednn/data/batching.hpp"
#include "raggednn/nn/model.hpp"
#include "raggednn/train/loss.hpp"
#include "raggednn/train/optimizer.hpp"

namespace raggednn {

using Metrics = std::map<std::string, double>;

struct EpochResult {
    double loss = 0.0;
    Metrics metric;
};

namespace detail {

/// Weighted accumulator for per-target MAE / accuracy across batches.
struct MetricAccumulator {
    double hits = 0.0;
    double rows = 0.0;
    std::vector<double> abs_err;  // per target

    void add_classification(const Matrix& logits, const std::vector<int>& labels) {
        for (Index r = 0; r < logits.rows(); ++r)
            if (argmax_row(logits, r) == labels[static_cast<std::size_t>(r)]) hits += 1.0;
        rows += static_cast<double>(logits.rows());
    }

    void add_regression(const Matrix& pred, const Matrix& targets) {
        if (abs_err.empty()) abs_err.assign(static_cast<std::size_t>(pred.cols()), 0.0);
        for (Index r = 0; r < pred.rows(); ++r)
            for (Index c = 0; c < pred.cols(); ++c)
                abs_err[static_cast<std::size_t>(c)] += std::abs(pred(r, c) - targets(r, c));
        rows += static_cast<double>(pred.rows());
    }

    Metrics finish(const std::vector<std::string>& target_names) const {
        Metrics out;
        if (!abs_err.empty()) {
            for (std::size_t c = 0; c < abs_err.size(); ++c) {
                const std::string name =
                    c < target_names.size() ? target_names[c] : "t" + std::to_string(c);
                out["mae." + name] = rows > 0 ? abs_err[c] / rows : 0.0;
            }
        } else {
            out["accuracy"] = rows > 0 ? hits / rows : 0.0;
        }
        return out;
    }
};

inline const std::vector<int>& batch_class_labels(const TrainingBatch& b) {
    return b.labels.empty() ? b.node_labels : b.labels;
}

} // namespace detail

/// One full pass over the batches: forward, loss, backward, optimizer
/// step per batch. Returns the mean loss (weighted by supervision rows)
/// and the training-pass metric. Deterministic under a fixed seed.
inline EpochResult train_epoch(Model& model, const std::vector<TrainingBatch>& batches,
                               LossKind loss_kind, Optimizer& optimizer,
                               const std::vector<std::string>& target_names = {}) {
    const Task task = model.spec().task_kind();
    double loss_sum = 0.0;
    double weight_sum = 0.0;
    detail::MetricAccumulator acc;

    for (const TrainingBatch& batch : batches) {
        ad::Tape tape;
        DisjointBatch d = to_disjoint(batch.graphs);
        Prediction pred = model.forward(tape, d);
        ad::NodeId loss;
        if (task == Task::GraphRegression) {
            loss = compute_loss(tape, loss_kind, pred.output, batch.targets);
            acc.add_regression(tape.value(pred.output), batch.targets);
        } else {
            const std::vector<int>& labels = detail::batch_class_labels(batch);
            loss = compute_loss(tape, loss_kind, pred.output, labels);
            acc.add_classification(tape.value(pred.output), labels);
        }
        tape.backward(loss);
        optimizer.step();

        const double weight = static_cast<double>(tape.value(pred.output).rows());
        loss_sum += tape.value(loss)(0, 0) * weight;
        weight_sum += weight;
    }
    EpochResult out;
    out.loss = weight_sum > 0 ? loss_sum / weight_sum : 0.0;
    out.metric = acc.finish(target_names);
    return out;
}

/// Metric pass with frozen parameters: accuracy for classification
/// tasks, per-target MAE for regression.
inline Metrics evaluate(Model& model, const std::vector<TrainingBatch>& batches,
                        const DatasetSpec& spec) {
    detail::MetricAccumulator acc;
    for (const TrainingBatch& batch : batches) {
        ad::Tape tape;
        Prediction pred = model.forward(tape, to_disjoint(batch.graphs));
        if (spec.task == Task::GraphRegression)
            acc.add_regression(tape.value(pred.output), batch.targets);
        else
            acc.add_classification(tape.value(pred.output), detail::batch_class_labels(batch));
    }
    return acc.finish(spec.target_names);
}

} // namespace raggednn
