// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "raggednn/errors.hpp"

namespace raggednn {

using Index = std::int64_t;

/// Dense row-major matrix of doubles. All library numerics are double
/// precision so finite-difference gradient checks hold at 1e-4.
class Matrix {
public:
    Matrix() = default;

    Matrix(Index rows, Index cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), fill) {
        if (rows < 0 || cols < 0) throw DimensionError("Matrix: negative shape");
    }

    /// Build from nested initializer lists; rows must share one width.
    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = static_cast<Index>(rows.size());
        cols_ = rows_ > 0 ? static_cast<Index>(rows.begin()->size()) : 0;
        data_.reserve(static_cast<std::size_t>(rows_ * cols_));
        for (const auto& r : rows) {
            if (static_cast<Index>(r.size()) != cols_)
                throw DimensionError("Matrix: ragged initializer rows");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index size() const { return rows_ * cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(Index r, Index c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
    double operator()(Index r, Index c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* row(Index r) { return data_.data() + r * cols_; }
    const double* row(Index r) const { return data_.data() + r * cols_; }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    std::string shape_str() const {
        return "(" + std::to_string(rows_) + "," + std::to_string(cols_) + ")";
    }

    static Matrix zeros_like(const Matrix& m) { return Matrix(m.rows_, m.cols_); }

    static Matrix full(Index rows, Index cols, double v) { return Matrix(rows, cols, v); }

    /// Single scalar wrapped as a 1x1 matrix.
    static Matrix scalar(double v) {
        Matrix m(1, 1);
        m(0, 0) = v;
        return m;
    }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    Index rows_ = 0;
    Index cols_ = 0;
    std::vector<double> data_;
};

namespace detail {
inline void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (!a.same_shape(b))
        throw DimensionError(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " +
                             b.shape_str());
}
} // namespace detail

inline Matrix add(const Matrix& a, const Matrix& b) {
    detail::require_same_shape(a, b, "add");
    Matrix out = a;
    for (Index i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
    return out;
}

inline Matrix sub(const Matrix& a, const Matrix& b) {
    detail::require_same_shape(a, b, "subtract");
    Matrix out = a;
    for (Index i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
    return out;
}

inline Matrix hadamard(const Matrix& a, const Matrix& b) {
    detail::require_same_shape(a, b, "elementwise-multiply");
    Matrix out = a;
    for (Index i = 0; i < out.size(); ++i) out.data()[i] *= b.data()[i];
    return out;
}

inline Matrix scale(const Matrix& a, double s) {
    Matrix out = a;
    for (Index i = 0; i < out.size(); ++i) out.data()[i] *= s;
    return out;
}

/// a (R,K) times b (K,C). ikj loop order keeps the inner loop contiguous.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw DimensionError("matmul: inner dimensions " + a.shape_str() + " vs " + b.shape_str());
    Matrix out(a.rows(), b.cols());
    const Index k_dim = a.cols(), c_dim = b.cols();
    for (Index i = 0; i < a.rows(); ++i) {
        double* out_row = out.row(i);
        const double* a_row = a.row(i);
        for (Index k = 0; k < k_dim; ++k) {
            const double aik = a_row[k];
            if (aik == 0.0) continue;
            const double* b_row = b.row(k);
            for (Index j = 0; j < c_dim; ++j) out_row[j] += aik * b_row[j];
        }
    }
    return out;
}

inline Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    detail::require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

} // namespace raggednn
