// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "raggednn/ad/tape.hpp"
#include "raggednn/nn/common.hpp"
#include "raggednn/random.hpp"

namespace raggednn {

enum class Activation { Linear, Relu, Sigmoid, Tanh, Softplus, ShiftedSoftplus };

inline Activation activation_from_string(const std::string& s) {
    if (s == "linear") return Activation::Linear;
    if (s == "relu") return Activation::Relu;
    if (s == "sigmoid") return Activation::Sigmoid;
    if (s == "tanh") return Activation::Tanh;
    if (s == "softplus") return Activation::Softplus;
    if (s == "shifted_softplus") return Activation::ShiftedSoftplus;
    throw ConfigError("unknown activation '" + s + "'");
}

inline ad::NodeId apply_activation(ad::Tape& t, ad::NodeId z, Activation act) {
    switch (act) {
        case Activation::Linear: return z;
        case Activation::Relu: return t.relu(z);
        case Activation::Sigmoid: return t.sigmoid(z);
        case Activation::Tanh: return t.tanh(z);
        case Activation::Softplus: return t.softplus(z);
        case Activation::ShiftedSoftplus: {
            // ln(0.5 e^x + 0.5) = softplus(x) - ln 2
            Matrix shift(1, t.value(z).cols(), -std::numbers::ln2);
            return t.add_bias(t.softplus(z), t.constant(shift));
        }
    }
    throw ConfigError("unhandled activation");
}

/// Fully connected layer: activation(x W + b). Weights are
/// Glorot-uniform, biases zero.
struct DenseLayer {
    ad::Variable weight;  // (F_in, F_out)
    ad::Variable bias;    // (1, F_out)
    Activation activation = Activation::Linear;

    DenseLayer() = default;
    DenseLayer(Index in, Index out, Activation act, Rng& rng)
        : weight(rng.glorot_uniform(in, out)), bias(Matrix(1, out)), activation(act) {}

    Index in_width() const { return weight.value.rows(); }
    Index out_width() const { return weight.value.cols(); }

    ad::NodeId apply(ad::Tape& t, ad::NodeId x) {
        if (t.value(x).cols() != in_width())
            throw DimensionError("dense: input width " + std::to_string(t.value(x).cols()) +
                                 " != " + std::to_string(in_width()));
        ad::NodeId z = t.add_bias(t.matmul(x, t.variable(weight)), t.variable(bias));
        return apply_activation(t, z, activation);
    }

    void collect(const std::string& prefix, std::vector<ParamRef>& out) {
        out.push_back({prefix + ".W", &weight});
        out.push_back({prefix + ".b", &bias});
    }
};

/// Stack of dense layers; hidden layers share one activation, the last
/// layer gets its own.
struct Mlp {
    std::vector<DenseLayer> layers;

    Mlp() = default;
    Mlp(Index in, const std::vector<Index>& widths, Activation hidden_act, Activation out_act,
        Rng& rng) {
        Index prev = in;
        for (std::size_t i = 0; i < widths.size(); ++i) {
            const bool last = i + 1 == widths.size();
            layers.emplace_back(prev, widths[i], last ? out_act : hidden_act, rng);
            prev = widths[i];
        }
    }

    Index in_width() const { return layers.front().in_width(); }
    Index out_width() const { return layers.back().out_width(); }

    ad::NodeId apply(ad::Tape& t, ad::NodeId x) {
        for (auto& layer : layers) x = layer.apply(t, x);
        return x;
    }

    void collect(const std::string& prefix, std::vector<ParamRef>& out) {
        for (std::size_t i = 0; i < layers.size(); ++i)
            layers[i].collect(prefix + "." + std::to_string(i), out);
    }
};

/// Gated recurrent cell: the recurrent option for message-passing
/// updates and the query cell of set2set.
struct GruCell {
    ad::Variable w_update, u_update, b_update;
    ad::Variable w_reset, u_reset, b_reset;
    ad::Variable w_cand, u_cand, b_cand;

    GruCell() = default;
    GruCell(Index input, Index hidden, Rng& rng)
        : w_update(rng.glorot_uniform(input, hidden)),
          u_update(rng.glorot_uniform(hidden, hidden)),
          b_update(Matrix(1, hidden)),
          w_reset(rng.glorot_uniform(input, hidden)),
          u_reset(rng.glorot_uniform(hidden, hidden)),
          b_reset(Matrix(1, hidden)),
          w_cand(rng.glorot_uniform(input, hidden)),
          u_cand(rng.glorot_uniform(hidden, hidden)),
          b_cand(Matrix(1, hidden)) {}

    Index hidden_width() const { return u_update.value.rows(); }

    ad::NodeId step(ad::Tape& t, ad::NodeId x, ad::NodeId h) {
        using ad::NodeId;
        NodeId z = t.sigmoid(t.add_bias(
            t.add(t.matmul(x, t.variable(w_update)), t.matmul(h, t.variable(u_update))),
            t.variable(b_update)));
        NodeId r = t.sigmoid(t.add_bias(
            t.add(t.matmul(x, t.variable(w_reset)), t.matmul(h, t.variable(u_reset))),
            t.variable(b_reset)));
        NodeId n = t.tanh(t.add_bias(
            t.add(t.matmul(x, t.variable(w_cand)), t.mul(r, t.matmul(h, t.variable(u_cand)))),
            t.variable(b_cand)));
        NodeId ones = t.constant(Matrix(t.value(z).rows(), t.value(z).cols(), 1.0));
        return t.add(t.mul(t.sub(ones, z), n), t.mul(z, h));
    }

    void collect(const std::string& prefix, std::vector<ParamRef>& out) {
        out.push_back({prefix + ".Wz", &w_update});
        out.push_back({prefix + ".Uz", &u_update});
        out.push_back({prefix + ".bz", &b_update});
        out.push_back({prefix + ".Wr", &w_reset});
        out.push_back({prefix + ".Ur", &u_reset});
        out.push_back({prefix + ".br", &b_reset});
        out.push_back({prefix + ".Wn", &w_cand});
        out.push_back({prefix + ".Un", &u_cand});
        out.push_back({prefix + ".bn", &b_cand});
    }
};

} // namespace raggednn
