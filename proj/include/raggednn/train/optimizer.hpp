// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "raggednn/matrix.hpp"
#include "raggednn/nn/common.hpp"

namespace raggednn {

struct OptimizerConfig {
    std::string kind = "adam";  // adam|sgd
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// First/second moment state per parameter plus the step counter; the
/// moment shapes mirror the parameter shapes.
struct OptimizerState {
    OptimizerConfig config;
    std::int64_t step = 0;
    std::vector<Matrix> first_moment;
    std::vector<Matrix> second_moment;
};

/// One bias-corrected Adam update over all parameters. Gradients must be
/// finite; a non-finite gradient aborts naming the parameter.
inline void adam_step(OptimizerState& state, const std::vector<ParamRef>& params) {
    const OptimizerConfig& c = state.config;
    state.step += 1;
    const double bias1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
    const double bias2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
    for (std::size_t p = 0; p < params.size(); ++p) {
        ad::Variable& var = *params[p].var;
        Matrix& m = state.first_moment[p];
        Matrix& v = state.second_moment[p];
        for (Index i = 0; i < var.value.size(); ++i) {
            const double g = var.grad.data()[i];
            if (!std::isfinite(g))
                throw NumericError("adam: non-finite gradient for parameter '" + params[p].name +
                                   "'");
            m.data()[i] = c.beta1 * m.data()[i] + (1.0 - c.beta1) * g;
            v.data()[i] = c.beta2 * v.data()[i] + (1.0 - c.beta2) * g * g;
            const double m_hat = m.data()[i] / bias1;
            const double v_hat = v.data()[i] / bias2;
            var.value.data()[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.epsilon);
        }
    }
}

inline void sgd_step(OptimizerState& state, const std::vector<ParamRef>& params) {
    state.step += 1;
    for (const auto& p : params) {
        for (Index i = 0; i < p.var->value.size(); ++i) {
            const double g = p.var->grad.data()[i];
            if (!std::isfinite(g))
                throw NumericError("sgd: non-finite gradient for parameter '" + p.name + "'");
            p.var->value.data()[i] -= state.config.lr * g;
        }
    }
}

/// Owns the optimizer state for one parameter set; `step()` consumes and
/// clears the accumulated gradients.
class Optimizer {
public:
    Optimizer(OptimizerConfig config, std::vector<ParamRef> params)
        : params_(std::move(params)) {
        if (config.kind != "adam" && config.kind != "sgd")
            throw ConfigError("optimizer: unknown kind '" + config.kind + "' (adam|sgd)");
        state_.config = std::move(config);
        for (const auto& p : params_) {
            state_.first_moment.push_back(Matrix::zeros_like(p.var->value));
            state_.second_moment.push_back(Matrix::zeros_like(p.var->value));
        }
    }

    void step() {
        if (state_.config.kind == "adam")
            adam_step(state_, params_);
        else
            sgd_step(state_, params_);
        for (const auto& p : params_) p.var->zero_grad();
    }

    const OptimizerState& state() const { return state_; }
    OptimizerState& state() { return state_; }
    const std::vector<ParamRef>& params() const { return params_; }

private:
    OptimizerState state_;
    std::vector<ParamRef> params_;
};

} // namespace raggednn
