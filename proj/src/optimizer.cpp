#include "optimizer.hpp"

#include <cmath>

namespace hdasc {

void adam_update(Tensor& param, const Tensor& grad, AdamMoments& state, const AdamConfig& cfg,
                 long step) {
    require_same_shape(param, grad, "adam_update");
    require_same_shape(param, state.m, "adam_update moments");
    if (!grad.all_finite()) throw TrainingDivergenceError("non-finite gradient in adam_update");
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
    for (size_t i = 0; i < param.numel(); ++i) {
        const double g = grad[i];
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        param[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
}

}  // namespace hdasc
