#pragma once

#include "layers.hpp"

namespace hdasc {

struct AdamConfig {
    double lr = 2e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// First/second moment accumulators for one parameter tensor.
struct AdamMoments {
    Tensor m, v;
};

// One Adam update with bias correction; `step` is the 1-based step counter
// after increment. Deterministic given inputs.
void adam_update(Tensor& param, const Tensor& grad, AdamMoments& state, const AdamConfig& cfg,
                 long step);

// Holds per-parameter moments and the shared step counter for a param list.
class Adam {
public:
    explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

    void attach(const ParamList& params) {
        for (const auto& p : params) {
            params_.push_back(p.var);
            states_.push_back({Tensor::zeros(p.var.value().shape()),
                               Tensor::zeros(p.var.value().shape())});
        }
    }

    void zero_grad() {
        for (auto& p : params_) p.zero_grad();
    }

    void step() {
        if (cfg_.lr <= 0.0) throw ConfigError("adam: learning rate must be > 0");
        ++step_count_;
        for (size_t i = 0; i < params_.size(); ++i) {
            if (!params_[i].has_grad()) continue;
            adam_update(params_[i].value_mut(), params_[i].grad(), states_[i], cfg_, step_count_);
        }
    }

    long step_count() const { return step_count_; }
    const AdamConfig& config() const { return cfg_; }

private:
    AdamConfig cfg_;
    long step_count_ = 0;
    std::vector<Var> params_;
    std::vector<AdamMoments> states_;
};

}  // namespace hdasc
