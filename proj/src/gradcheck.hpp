#pragma once

#include <functional>

#include "autodiff.hpp"

namespace hdasc {

// Central finite-difference check of the tape gradient. `op` must map its
// input to a scalar Var (callers reduce via a fixed projection if needed).
// Returns max over coordinates of |analytic - numeric| / (|analytic| + epsilon).
inline double finite_difference_check(const std::function<Var(const Var&)>& op,
                                      const Tensor& input, double epsilon) {
    Var x = Var::param(input);
    Var y = op(x);
    if (y.value().numel() != 1) throw DimensionError("finite_difference_check: op must be scalar");
    backward(y);
    Tensor analytic = x.has_grad() ? x.grad() : Tensor::zeros(input.shape());

    double worst = 0.0;
    for (size_t i = 0; i < input.numel(); ++i) {
        Tensor plus = input, minus = input;
        plus[i] += epsilon;
        minus[i] -= epsilon;
        const double fp = op(Var::constant(plus)).value()[0];
        const double fm = op(Var::constant(minus)).value()[0];
        const double numeric = (fp - fm) / (2.0 * epsilon);
        const double err = std::abs(analytic[i] - numeric) / (std::abs(analytic[i]) + epsilon);
        if (err > worst) worst = err;
    }
    return worst;
}

}  // namespace hdasc
