// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>
#include <span>

#include "raggednn/ad/tape.hpp"
#include "raggednn/errors.hpp"

namespace raggednn::ad {

/// Scalar loss over the current values of some parameter set. When
/// `accumulate_grads` is set the function must also write d(loss)/d(param)
/// into each Variable's grad (a fresh tape forward + backward).
using ScalarFn = std::function<double(bool accumulate_grads)>;

/// Compare analytic gradients against central finite differences
/// (f(t+eps) - f(t-eps)) / 2 eps, one coordinate at a time. Returns the
/// maximum relative error |a - n| / max(|a|, |n|, 1e-8).
///
/// The function should be twice differentiable at the evaluation point;
/// callers sample inputs away from relu/max kinks.
inline double max_rel_grad_error(const ScalarFn& f, std::span<Variable* const> params,
                                 double eps = 1e-5) {
    for (Variable* p : params) p->zero_grad();
    const double base = f(true);
    if (!std::isfinite(base)) throw NumericError("grad_check: non-finite loss");

    double worst = 0.0;
    for (Variable* p : params) {
        for (Index i = 0; i < p->value.size(); ++i) {
            const double saved = p->value.data()[i];
            p->value.data()[i] = saved + eps;
            const double up = f(false);
            p->value.data()[i] = saved - eps;
            const double down = f(false);
            p->value.data()[i] = saved;
            if (!std::isfinite(up) || !std::isfinite(down))
                throw NumericError("grad_check: non-finite perturbed loss");
            const double numeric = (up - down) / (2.0 * eps);
            const double analytic = p->grad.data()[i];
            const double err = std::abs(analytic - numeric) /
                               std::max({std::abs(analytic), std::abs(numeric), 1e-8});
            worst = std::max(worst, err);
        }
    }
    return worst;
}

} // namespace raggednn::ad
