// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <vector>

#include "raggednn/matrix.hpp"

namespace raggednn {

/// Seeded RNG used everywhere randomness enters (init, shuffles, splits).
/// Shuffling is hand-rolled Fisher-Yates so index sequences do not depend
/// on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, n). n must be positive.
    Index uniform_index(Index n) {
        return static_cast<Index>(engine_() % static_cast<std::uint64_t>(n));
    }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    double normal(double mean = 0.0, double stddev = 1.0) {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }

    bool bernoulli(double p) { return uniform(0.0, 1.0) < p; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (Index i = static_cast<Index>(v.size()) - 1; i > 0; --i) {
            Index j = uniform_index(i + 1);
            std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
        }
    }

    Matrix uniform_matrix(Index rows, Index cols, double lo, double hi) {
        Matrix m(rows, cols);
        for (Index i = 0; i < m.size(); ++i) m.data()[i] = uniform(lo, hi);
        return m;
    }

    Matrix normal_matrix(Index rows, Index cols, double mean = 0.0, double stddev = 1.0) {
        Matrix m(rows, cols);
        for (Index i = 0; i < m.size(); ++i) m.data()[i] = normal(mean, stddev);
        return m;
    }

    /// Glorot-uniform initialization for a (fan_in, fan_out) weight matrix.
    Matrix glorot_uniform(Index fan_in, Index fan_out) {
        double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        return uniform_matrix(fan_in, fan_out, -limit, limit);
    }

    /// Engine state as text; bit-exact save/restore for checkpoints.
    std::string serialize_state() const {
        std::ostringstream os;
        os << engine_;
        return os.str();
    }

    void restore_state(const std::string& state) {
        std::istringstream is(state);
        is >> engine_;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace raggednn
