// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "raggednn/errors.hpp"
#include "raggednn/kernels.hpp"
#include "raggednn/matrix.hpp"

namespace raggednn::ad {

/// Trainable parameter: value plus an accumulated gradient of identical
/// shape. Owned by a layer; bound onto a tape each forward pass.
struct Variable {
    Matrix value;
    Matrix grad;

    Variable() = default;
    explicit Variable(Matrix v) : value(std::move(v)), grad(Matrix::zeros_like(value)) {}

    void zero_grad() { grad = Matrix::zeros_like(value); }
};

struct NodeId {
    Index index = -1;
    friend bool operator==(const NodeId&, const NodeId&) = default;
};

enum class OpKind {
    Leaf,
    Add,
    Sub,
    Mul,
    Scale,
    MatMul,
    ConcatCols,
    SliceCols,
    AddBias,
    ScaleRows,
    Gather,
    SegmentSum,
    SegmentMean,
    SegmentMax,
    SegmentSoftmax,
    Relu,
    Sigmoid,
    Tanh,
    Softplus,
    Square,
    Abs,
    Sqrt,
    Reciprocal,
    SumAll,
    MeanAll,
    SoftmaxCrossEntropy,
};

/// One recorded operation: kind, input node ids, the forward output, and
/// whatever the backward rule needs (indices, counts, saved matrices).
struct OpRecord {
    OpKind kind = OpKind::Leaf;
    std::vector<Index> inputs;
    Matrix value;
    Matrix grad;                    // lazily sized during backward
    std::vector<Index> indices;     // gather indices / segment ids
    std::vector<Index> counts;      // per-segment row counts (mean) or argmax table (max)
    std::vector<int> labels;        // cross entropy targets
    Matrix saved;                   // op-specific forward by-product (softmax probs)
    Index num_segments = 0;
    Index slice_begin = 0, slice_end = 0;
    double scalar = 0.0;
    Variable* bound = nullptr;
};

/// Append-only reverse-mode tape over the primitive set used by the graph
/// layers. Records are topologically ordered by construction; backward
/// walks them exactly once in reverse, accumulating vector-Jacobian
/// products additively across fan-out.
///
/// One tape per training step; a tape is single-threaded.
class Tape {
public:
    Index size() const { return static_cast<Index>(records_.size()); }

    const Matrix& value(NodeId id) const { return rec(id).value; }

    /// Gradient of the last backward() seed w.r.t. this node; zeros if the
    /// node did not influence the seed.
    Matrix grad(NodeId id) const {
        const OpRecord& r = rec(id);
        return r.grad.empty() && r.value.size() > 0 ? Matrix::zeros_like(r.value) : r.grad;
    }

    NodeId constant(Matrix value) { return push_leaf(std::move(value), nullptr); }

    /// Record the current value of a parameter; backward() adds this
    /// leaf's gradient into the Variable's grad buffer.
    NodeId variable(Variable& var) { return push_leaf(var.value, &var); }

    NodeId add(NodeId a, NodeId b) {
        detail::require_same_shape(val(a), val(b), "add");
        return push(OpKind::Add, {a, b}, raggednn::add(val(a), val(b)));
    }

    NodeId sub(NodeId a, NodeId b) {
        detail::require_same_shape(val(a), val(b), "subtract");
        return push(OpKind::Sub, {a, b}, raggednn::sub(val(a), val(b)));
    }

    NodeId mul(NodeId a, NodeId b) {
        detail::require_same_shape(val(a), val(b), "elementwise-multiply");
        return push(OpKind::Mul, {a, b}, hadamard(val(a), val(b)));
    }

    NodeId scale(NodeId a, double s) {
        OpRecord r = make(OpKind::Scale, {a}, raggednn::scale(val(a), s));
        r.scalar = s;
        return append(std::move(r));
    }

    NodeId matmul(NodeId a, NodeId b) {
        return push(OpKind::MatMul, {a, b}, raggednn::matmul(val(a), val(b)));
    }

    NodeId concat_cols(std::span<const NodeId> parts) {
        if (parts.empty()) throw ContractError("concat_cols: no inputs");
        const Index rows = val(parts.front()).rows();
        Index width = 0;
        for (NodeId p : parts) {
            if (val(p).rows() != rows)
                throw DimensionError("concat_cols: row mismatch " + val(p).shape_str());
            width += val(p).cols();
        }
        Matrix out(rows, width);
        Index at = 0;
        for (NodeId p : parts) {
            const Matrix& m = val(p);
            for (Index i = 0; i < rows; ++i)
                for (Index c = 0; c < m.cols(); ++c) out(i, at + c) = m(i, c);
            at += m.cols();
        }
        OpRecord r = make(OpKind::ConcatCols, {}, std::move(out));
        for (NodeId p : parts) r.inputs.push_back(p.index);
        return append(std::move(r));
    }

    NodeId concat_cols(std::initializer_list<NodeId> parts) {
        std::vector<NodeId> v(parts);
        return concat_cols(std::span<const NodeId>(v));
    }

    NodeId slice_cols(NodeId a, Index begin, Index end) {
        const Matrix& m = val(a);
        if (begin < 0 || end > m.cols() || begin >= end)
            throw DimensionError("slice_cols: [" + std::to_string(begin) + "," +
                                 std::to_string(end) + ") out of width " + std::to_string(m.cols()));
        Matrix out(m.rows(), end - begin);
        for (Index i = 0; i < m.rows(); ++i)
            for (Index c = begin; c < end; ++c) out(i, c - begin) = m(i, c);
        OpRecord r = make(OpKind::SliceCols, {a}, std::move(out));
        r.slice_begin = begin;
        r.slice_end = end;
        return append(std::move(r));
    }

    /// x (R,F) + bias (1,F) broadcast over rows. The only broadcast the
    /// tape supports besides scalar scaling.
    NodeId add_bias(NodeId x, NodeId bias) {
        const Matrix& m = val(x);
        const Matrix& b = val(bias);
        if (b.rows() != 1 || b.cols() != m.cols())
            throw DimensionError("add_bias: bias " + b.shape_str() + " does not match " +
                                 m.shape_str());
        Matrix out = m;
        for (Index i = 0; i < m.rows(); ++i)
            for (Index c = 0; c < m.cols(); ++c) out(i, c) += b(0, c);
        return push(OpKind::AddBias, {x, bias}, std::move(out));
    }

    /// out[r,:] = x[r,:] * s[r,0] with s of shape (R,1); row gating for
    /// attention weights and pooling gates.
    NodeId scale_rows(NodeId x, NodeId s) {
        const Matrix& m = val(x);
        const Matrix& sc = val(s);
        if (sc.rows() != m.rows() || sc.cols() != 1)
            throw DimensionError("scale_rows: scale " + sc.shape_str() + " does not match rows of " +
                                 m.shape_str());
        Matrix out = m;
        for (Index i = 0; i < m.rows(); ++i)
            for (Index c = 0; c < m.cols(); ++c) out(i, c) *= sc(i, 0);
        return push(OpKind::ScaleRows, {x, s}, std::move(out));
    }

    NodeId gather_rows(NodeId a, std::vector<Index> indices) {
        Matrix out = raggednn::gather_rows(val(a), indices);
        OpRecord r = make(OpKind::Gather, {a}, std::move(out));
        r.indices = std::move(indices);
        return append(std::move(r));
    }

    NodeId segment_sum(NodeId a, std::vector<Index> ids, Index num_segments) {
        return segment_op(OpKind::SegmentSum, a, std::move(ids), num_segments, Reducer::Sum);
    }

    NodeId segment_mean(NodeId a, std::vector<Index> ids, Index num_segments) {
        return segment_op(OpKind::SegmentMean, a, std::move(ids), num_segments, Reducer::Mean);
    }

    NodeId segment_max(NodeId a, std::vector<Index> ids, Index num_segments) {
        Matrix out = segment_reduce(val(a), ids, num_segments, Reducer::Max);
        OpRecord r = make(OpKind::SegmentMax, {a}, std::move(out));
        r.counts = segment_argmax(val(a), ids, num_segments);  // gradient routing table
        r.indices = std::move(ids);
        r.num_segments = num_segments;
        return append(std::move(r));
    }

    /// Shift-by-max softmax over each segment of a (R,1) column.
    NodeId segment_softmax(NodeId a, std::vector<Index> ids, Index num_segments) {
        const Matrix& v = val(a);
        if (v.cols() != 1) throw DimensionError("segment_softmax: expects a (R,1) column");
        detail::check_segment_ids(ids, num_segments, v.rows());
        std::vector<double> seg_max(static_cast<std::size_t>(num_segments),
                                    -std::numeric_limits<double>::infinity());
        for (Index r = 0; r < v.rows(); ++r) {
            auto& m = seg_max[static_cast<std::size_t>(ids[static_cast<std::size_t>(r)])];
            m = std::max(m, v(r, 0));
        }
        std::vector<double> seg_den(static_cast<std::size_t>(num_segments), 0.0);
        Matrix out(v.rows(), 1);
        for (Index r = 0; r < v.rows(); ++r) {
            const Index s = ids[static_cast<std::size_t>(r)];
            out(r, 0) = std::exp(v(r, 0) - seg_max[static_cast<std::size_t>(s)]);
            seg_den[static_cast<std::size_t>(s)] += out(r, 0);
        }
        for (Index r = 0; r < v.rows(); ++r)
            out(r, 0) /= seg_den[static_cast<std::size_t>(ids[static_cast<std::size_t>(r)])];
        OpRecord r = make(OpKind::SegmentSoftmax, {a}, std::move(out));
        r.indices = std::move(ids);
        r.num_segments = num_segments;
        return append(std::move(r));
    }

    NodeId relu(NodeId a) {
        return unary(OpKind::Relu, a, [](double x) { return x > 0.0 ? x : 0.0; });
    }

    NodeId sigmoid(NodeId a) {
        return unary(OpKind::Sigmoid, a, [](double x) {
            return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
        });
    }

    NodeId tanh(NodeId a) {
        return unary(OpKind::Tanh, a, [](double x) { return std::tanh(x); });
    }

    NodeId softplus(NodeId a) {
        return unary(OpKind::Softplus, a, [](double x) {
            return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
        });
    }

    NodeId square(NodeId a) {
        return unary(OpKind::Square, a, [](double x) { return x * x; });
    }

    NodeId abs(NodeId a) {
        return unary(OpKind::Abs, a, [](double x) { return std::abs(x); });
    }

    /// Elementwise square root; inputs must be non-negative and the
    /// gradient at 0 is unbounded, so keep arguments strictly positive.
    NodeId sqrt(NodeId a) {
        for (Index i = 0; i < val(a).size(); ++i)
            if (val(a).data()[i] < 0.0) throw NumericError("sqrt: negative input");
        return unary(OpKind::Sqrt, a, [](double x) { return std::sqrt(x); });
    }

    /// Elementwise 1/x; entries must be nonzero.
    NodeId reciprocal(NodeId a) {
        for (Index i = 0; i < val(a).size(); ++i)
            if (val(a).data()[i] == 0.0) throw NumericError("reciprocal: zero input");
        return unary(OpKind::Reciprocal, a, [](double x) { return 1.0 / x; });
    }

    NodeId sum_all(NodeId a) {
        double s = 0.0;
        for (Index i = 0; i < val(a).size(); ++i) s += val(a).data()[i];
        return push(OpKind::SumAll, {a}, Matrix::scalar(s));
    }

    NodeId mean_all(NodeId a) {
        if (val(a).size() == 0) throw ContractError("mean_all: empty input");
        double s = 0.0;
        for (Index i = 0; i < val(a).size(); ++i) s += val(a).data()[i];
        return push(OpKind::MeanAll, {a}, Matrix::scalar(s / static_cast<double>(val(a).size())));
    }

    /// Mean cross entropy of row-wise softmax(logits) against integer
    /// class labels. Fused for numeric stability; backward is
    /// (softmax - onehot) / B.
    NodeId softmax_cross_entropy(NodeId logits, std::vector<int> labels) {
        const Matrix& z = val(logits);
        if (static_cast<Index>(labels.size()) != z.rows())
            throw DimensionError("softmax_cross_entropy: " + std::to_string(labels.size()) +
                                 " labels for " + std::to_string(z.rows()) + " rows");
        if (z.rows() == 0) throw ContractError("softmax_cross_entropy: empty batch");
        Matrix probs(z.rows(), z.cols());
        double loss = 0.0;
        for (Index i = 0; i < z.rows(); ++i) {
            const int y = labels[static_cast<std::size_t>(i)];
            if (y < 0 || y >= z.cols())
                throw ValidationError("softmax_cross_entropy: label " + std::to_string(y) +
                                      " outside [0," + std::to_string(z.cols()) + ")");
            double mx = z(i, 0);
            for (Index c = 1; c < z.cols(); ++c) mx = std::max(mx, z(i, c));
            double den = 0.0;
            for (Index c = 0; c < z.cols(); ++c) den += std::exp(z(i, c) - mx);
            for (Index c = 0; c < z.cols(); ++c) probs(i, c) = std::exp(z(i, c) - mx) / den;
            loss += std::log(den) + mx - z(i, y);
        }
        OpRecord r = make(OpKind::SoftmaxCrossEntropy, {logits},
                          Matrix::scalar(loss / static_cast<double>(z.rows())));
        r.labels = std::move(labels);
        r.saved = std::move(probs);
        return append(std::move(r));
    }

    /// Reverse sweep seeded at a scalar output. Gradients of bound
    /// parameter leaves are accumulated into their Variables.
    void backward(NodeId output) {
        OpRecord& out = rec(output);
        if (out.value.rows() != 1 || out.value.cols() != 1)
            throw ContractError("backward: seed must be scalar, got " + out.value.shape_str());
        for (auto& r : records_) r.grad = Matrix();
        out.grad = Matrix::scalar(1.0);
        for (Index i = static_cast<Index>(records_.size()) - 1; i >= 0; --i) {
            OpRecord& r = records_[static_cast<std::size_t>(i)];
            if (r.grad.empty()) continue;
            propagate(r);
        }
        for (auto& r : records_)
            if (r.kind == OpKind::Leaf && r.bound != nullptr && !r.grad.empty())
                r.bound->grad = raggednn::add(r.bound->grad, r.grad);
    }

private:
    std::vector<OpRecord> records_;

    const OpRecord& rec(NodeId id) const {
        if (id.index < 0 || id.index >= size()) throw ContractError("tape: invalid node id");
        return records_[static_cast<std::size_t>(id.index)];
    }
    OpRecord& rec(NodeId id) { return records_[static_cast<std::size_t>(id.index)]; }
    const Matrix& val(NodeId id) const { return rec(id).value; }

    OpRecord make(OpKind kind, std::initializer_list<NodeId> inputs, Matrix value) {
        OpRecord r;
        r.kind = kind;
        for (NodeId id : inputs) {
            if (id.index < 0 || id.index >= size()) throw ContractError("tape: invalid input id");
            r.inputs.push_back(id.index);
        }
        r.value = std::move(value);
        return r;
    }

    NodeId append(OpRecord r) {
        records_.push_back(std::move(r));
        return NodeId{static_cast<Index>(records_.size()) - 1};
    }

    NodeId push(OpKind kind, std::initializer_list<NodeId> inputs, Matrix value) {
        return append(make(kind, inputs, std::move(value)));
    }

    NodeId push_leaf(Matrix value, Variable* bound) {
        OpRecord r = make(OpKind::Leaf, {}, std::move(value));
        r.bound = bound;
        return append(std::move(r));
    }

    template <class F>
    NodeId unary(OpKind kind, NodeId a, F&& f) {
        Matrix out = val(a);
        for (Index i = 0; i < out.size(); ++i) out.data()[i] = f(out.data()[i]);
        return push(kind, {a}, std::move(out));
    }

    NodeId segment_op(OpKind kind, NodeId a, std::vector<Index> ids, Index num_segments,
                      Reducer reducer) {
        Matrix out = segment_reduce(val(a), ids, num_segments, reducer);
        OpRecord r = make(kind, {a}, std::move(out));
        if (kind == OpKind::SegmentMean) {
            r.counts.assign(static_cast<std::size_t>(num_segments), 0);
            for (Index id : ids) ++r.counts[static_cast<std::size_t>(id)];
        }
        r.indices = std::move(ids);
        r.num_segments = num_segments;
        return append(std::move(r));
    }

    Matrix& grad_of(Index input_pos, const OpRecord& owner) {
        OpRecord& in = records_[static_cast<std::size_t>(owner.inputs[static_cast<std::size_t>(input_pos)])];
        if (in.grad.empty() && in.value.size() > 0) in.grad = Matrix::zeros_like(in.value);
        if (in.grad.empty()) in.grad = Matrix(in.value.rows(), in.value.cols());
        return in.grad;
    }

    const Matrix& in_val(const OpRecord& r, Index pos) const {
        return records_[static_cast<std::size_t>(r.inputs[static_cast<std::size_t>(pos)])].value;
    }

    void propagate(OpRecord& r) {
        const Matrix& g = r.grad;
        switch (r.kind) {
            case OpKind::Leaf:
                break;
            case OpKind::Add: {
                accumulate(grad_of(0, r), g);
                accumulate(grad_of(1, r), g);
                break;
            }
            case OpKind::Sub: {
                accumulate(grad_of(0, r), g);
                Matrix& db = grad_of(1, r);
                for (Index i = 0; i < g.size(); ++i) db.data()[i] -= g.data()[i];
                break;
            }
            case OpKind::Mul: {
                const Matrix& a = in_val(r, 0);
                const Matrix& b = in_val(r, 1);
                Matrix& da = grad_of(0, r);
                Matrix& db = grad_of(1, r);
                for (Index i = 0; i < g.size(); ++i) {
                    da.data()[i] += g.data()[i] * b.data()[i];
                    db.data()[i] += g.data()[i] * a.data()[i];
                }
                break;
            }
            case OpKind::Scale: {
                Matrix& da = grad_of(0, r);
                for (Index i = 0; i < g.size(); ++i) da.data()[i] += r.scalar * g.data()[i];
                break;
            }
            case OpKind::MatMul: {
                accumulate(grad_of(0, r), raggednn::matmul(g, transpose(in_val(r, 1))));
                accumulate(grad_of(1, r), raggednn::matmul(transpose(in_val(r, 0)), g));
                break;
            }
            case OpKind::ConcatCols: {
                Index at = 0;
                for (std::size_t p = 0; p < r.inputs.size(); ++p) {
                    Matrix& dp = grad_of(static_cast<Index>(p), r);
                    for (Index i = 0; i < dp.rows(); ++i)
                        for (Index c = 0; c < dp.cols(); ++c) dp(i, c) += g(i, at + c);
                    at += dp.cols();
                }
                break;
            }
            case OpKind::SliceCols: {
                Matrix& da = grad_of(0, r);
                for (Index i = 0; i < g.rows(); ++i)
                    for (Index c = 0; c < g.cols(); ++c) da(i, r.slice_begin + c) += g(i, c);
                break;
            }
            case OpKind::AddBias: {
                accumulate(grad_of(0, r), g);
                Matrix& db = grad_of(1, r);
                for (Index i = 0; i < g.rows(); ++i)
                    for (Index c = 0; c < g.cols(); ++c) db(0, c) += g(i, c);
                break;
            }
            case OpKind::ScaleRows: {
                const Matrix& x = in_val(r, 0);
                const Matrix& s = in_val(r, 1);
                Matrix& dx = grad_of(0, r);
                Matrix& ds = grad_of(1, r);
                for (Index i = 0; i < g.rows(); ++i)
                    for (Index c = 0; c < g.cols(); ++c) {
                        dx(i, c) += g(i, c) * s(i, 0);
                        ds(i, 0) += g(i, c) * x(i, c);
                    }
                break;
            }
            case OpKind::Gather: {
                // adjoint of gather is scatter-add by the same indices
                Matrix& da = grad_of(0, r);
                for (std::size_t k = 0; k < r.indices.size(); ++k)
                    for (Index c = 0; c < g.cols(); ++c)
                        da(r.indices[k], c) += g(static_cast<Index>(k), c);
                break;
            }
            case OpKind::SegmentSum: {
                // adjoint of segment-sum is gather by segment id
                Matrix& da = grad_of(0, r);
                for (Index i = 0; i < da.rows(); ++i) {
                    const Index s = r.indices[static_cast<std::size_t>(i)];
                    for (Index c = 0; c < da.cols(); ++c) da(i, c) += g(s, c);
                }
                break;
            }
            case OpKind::SegmentMean: {
                Matrix& da = grad_of(0, r);
                for (Index i = 0; i < da.rows(); ++i) {
                    const Index s = r.indices[static_cast<std::size_t>(i)];
                    const double inv = 1.0 / static_cast<double>(r.counts[static_cast<std::size_t>(s)]);
                    for (Index c = 0; c < da.cols(); ++c) da(i, c) += g(s, c) * inv;
                }
                break;
            }
            case OpKind::SegmentMax: {
                // route to argmax rows only; ties already resolved to the
                // lowest row index when the table was built
                Matrix& da = grad_of(0, r);
                const Index width = da.cols();
                for (Index s = 0; s < r.num_segments; ++s)
                    for (Index c = 0; c < width; ++c) {
                        const Index row = r.counts[static_cast<std::size_t>(s * width + c)];
                        if (row >= 0) da(row, c) += g(s, c);
                    }
                break;
            }
            case OpKind::SegmentSoftmax: {
                const Matrix& alpha = r.value;
                std::vector<double> seg_dot(static_cast<std::size_t>(r.num_segments), 0.0);
                for (Index i = 0; i < alpha.rows(); ++i)
                    seg_dot[static_cast<std::size_t>(r.indices[static_cast<std::size_t>(i)])] +=
                        g(i, 0) * alpha(i, 0);
                Matrix& da = grad_of(0, r);
                for (Index i = 0; i < alpha.rows(); ++i) {
                    const Index s = r.indices[static_cast<std::size_t>(i)];
                    da(i, 0) += alpha(i, 0) * (g(i, 0) - seg_dot[static_cast<std::size_t>(s)]);
                }
                break;
            }
            case OpKind::Relu: {
                Matrix& da = grad_of(0, r);
                const Matrix& x = in_val(r, 0);
                for (Index i = 0; i < g.size(); ++i)
                    if (x.data()[i] > 0.0) da.data()[i] += g.data()[i];  // relu'(0) := 0
                break;
            }
            case OpKind::Sigmoid: {
                Matrix& da = grad_of(0, r);
                for (Index i = 0; i < g.size(); ++i) {
                    const double y = r.value.data()[i];
                    da.data()[i] += g.data()[i] * y * (1.0 - y);
                }
                break;
            }
            case OpKind::Tanh: {
                Matrix& da = grad_of(0, r);
                for (Index i = 0; i < g.size(); ++i) {
                    const double y = r.value.data()[i];
                    da.data()[i] += g.data()[i] * (1.0 - y * y);
                }
                break;
            }
            case OpKind::Softplus: {
                // softplus' = sigmoid(x) = 1 - exp(-softplus(x))
                Matrix& da = grad_of(0, r);
                for (Index i = 0; i < g.size(); ++i)
                    da.data()[i] += g.data()[i] * (1.0 - std::exp(-r.value.data()[i]));
                break;
            }
            case OpKind::Square: {
                Matrix& da = grad_of(0, r);
                const Matrix& x = in_val(r, 0);
                for (Index i = 0; i < g.size(); ++i) da.data()[i] += 2.0 * g.data()[i] * x.data()[i];
                break;
            }
            case OpKind::Abs: {
                Matrix& da = grad_of(0, r);
                const Matrix& x = in_val(r, 0);
                for (Index i = 0; i < g.size(); ++i) {
                    const double s = x.data()[i] > 0.0 ? 1.0 : (x.data()[i] < 0.0 ? -1.0 : 0.0);
                    da.data()[i] += g.data()[i] * s;
                }
                break;
            }
            case OpKind::Sqrt: {
                Matrix& da = grad_of(0, r);
                for (Index i = 0; i < g.size(); ++i)
                    da.data()[i] += g.data()[i] * 0.5 / r.value.data()[i];
                break;
            }
            case OpKind::Reciprocal: {
                Matrix& da = grad_of(0, r);
                for (Index i = 0; i < g.size(); ++i) {
                    const double y = r.value.data()[i];
                    da.data()[i] -= g.data()[i] * y * y;
                }
                break;
            }
            case OpKind::SumAll: {
                Matrix& da = grad_of(0, r);
                const double s = g(0, 0);
                for (Index i = 0; i < da.size(); ++i) da.data()[i] += s;
                break;
            }
            case OpKind::MeanAll: {
                Matrix& da = grad_of(0, r);
                const double s = g(0, 0) / static_cast<double>(da.size());
                for (Index i = 0; i < da.size(); ++i) da.data()[i] += s;
                break;
            }
            case OpKind::SoftmaxCrossEntropy: {
                Matrix& da = grad_of(0, r);
                const double s = g(0, 0) / static_cast<double>(da.rows());
                for (Index i = 0; i < da.rows(); ++i) {
                    for (Index c = 0; c < da.cols(); ++c) da(i, c) += s * r.saved(i, c);
                    da(i, r.labels[static_cast<std::size_t>(i)]) -= s;
                }
                break;
            }
        }
    }

    static void accumulate(Matrix& into, const Matrix& g) {
        for (Index i = 0; i < into.size(); ++i) into.data()[i] += g.data()[i];
    }
};

} // namespace raggednn::ad
