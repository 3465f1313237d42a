#pragma once

#include <functional>

#include "layers.hpp"

namespace hdasc {

// Linear-in-t variance schedule gamma(t) = 0.5 t / T with cumulative signal
// coefficient alpha_bar(t) = sqrt(prod (1-gamma)) and noise coefficient
// gamma_bar(t) = sqrt(1 - alpha_bar^2); alpha_bar(0) = 1.
struct DiffusionSchedule {
    int steps = 0;
    std::vector<double> gamma;      // [0..T], gamma[0] unused
    std::vector<double> alpha_bar;  // [0..T]
    std::vector<double> gamma_bar;  // [0..T]
};

DiffusionSchedule build_schedule(int steps);

// x_t = alpha_bar(t) x0 + gamma_bar(t) eps.
Tensor forward_sample(const Tensor& x0, int t, const Tensor& eps, const DiffusionSchedule& sched);

// Dense noise predictor with a sinusoidal step embedding appended to the
// signal vector. An input-proportional skip with a per-step learned gain
// carries the linear part of the estimate; the dense stack corrects it.
// The gain head starts at unity so training begins from eps_hat = x.
class NoisePredictor {
public:
    NoisePredictor() = default;
    NoisePredictor(int signal_dim, int width, int embed_dim, Rng& rng)
        : embed_dim_(embed_dim),
          l1_(signal_dim + embed_dim, width, rng),
          l2_(width, width, rng),
          l3_(width, width, rng),
          l4_(width, signal_dim, rng),
          gain_(embed_dim, 1, rng) {}

    template <class T>
    T predict(const T& x, int t) const {
        Tensor emb = step_embedding(t, embed_dim_);
        if constexpr (std::is_same_v<T, Var>) {
            Var embv = Var::constant(emb);
            T h = concat(x, embv);
            h = leaky_relu(l1_.apply(h), 0.2);
            h = leaky_relu(l2_.apply(h), 0.2);
            h = leaky_relu(l3_.apply(h), 0.2);
            Var g = add_scalar(gain_.apply(embv), 1.0);
            return add(bcast_mul(x, g), l4_.apply(h));
        } else {
            T h = concat(x, emb);
            h = leaky_relu(l1_.apply(h), 0.2);
            h = leaky_relu(l2_.apply(h), 0.2);
            h = leaky_relu(l3_.apply(h), 0.2);
            Tensor g = add_scalar(gain_.apply(emb), 1.0);
            return add(bcast_mul(x, g), l4_.apply(h));
        }
    }

    static Tensor step_embedding(int t, int dim);

    void collect(const std::string& prefix, ParamList& out) {
        l1_.collect(prefix + "/l1", out);
        l2_.collect(prefix + "/l2", out);
        l3_.collect(prefix + "/l3", out);
        l4_.collect(prefix + "/l4", out);
        gain_.collect(prefix + "/gain", out);
    }

private:
    int embed_dim_ = 0;
    DenseLayer l1_, l2_, l3_, l4_;
    DenseLayer gain_;
};

// Blind residual predictor (single pass, no step information). A learnable
// scalar input gain carries the linear part of the residual; it starts at
// zero so the untrained net is the identity denoiser.
class OneStepDenoiser {
public:
    OneStepDenoiser() = default;
    OneStepDenoiser(int signal_dim, int width, Rng& rng)
        : l1_(signal_dim, width, rng), l2_(width, width, rng), l3_(width, width, rng),
          l4_(width, signal_dim, rng), gain_(Var::param(Tensor::zeros(Shape{1}))) {}

    template <class T>
    T predict_residual(const T& x) const {
        T h = leaky_relu(l1_.apply(x), 0.2);
        h = leaky_relu(l2_.apply(h), 0.2);
        h = leaky_relu(l3_.apply(h), 0.2);
        if constexpr (std::is_same_v<T, Var>)
            return add(bcast_mul(x, gain_), l4_.apply(h));
        else
            return add(bcast_mul(x, gain_.value()), l4_.apply(h));
    }

    void collect(const std::string& prefix, ParamList& out) {
        l1_.collect(prefix + "/l1", out);
        l2_.collect(prefix + "/l2", out);
        l3_.collect(prefix + "/l3", out);
        l4_.collect(prefix + "/l4", out);
        out.push_back({prefix + "/gain", gain_});
    }

private:
    DenseLayer l1_, l2_, l3_, l4_;
    Var gain_;
};

// E|| eps - predictor(alpha_bar(t) x0 + gamma_bar(t) eps, t) ||^2 with t and
// eps sampled per batch element; gradients flow to the predictor only.
// step_sampler overrides the default uniform draw of t in [1, T].
using StepSampler = std::function<int(Rng&)>;
Var diffusion_loss(const std::vector<Tensor>& x0_batch, const NoisePredictor& predictor,
                   const DiffusionSchedule& sched, Rng& rng,
                   const StepSampler& step_sampler = {});

// x_tilde = x_hat / sqrt(1 + v); v is the noise variance per vector element.
Tensor rescale_detected(const Tensor& x_hat, double noise_var);

// Largest step whose signal coefficient bracket contains 1/sqrt(1+v).
int map_noise_to_step(double noise_var, const DiffusionSchedule& sched);

// Deterministic reverse updates from the mapped starting step down to zero.
// The functor form exists so tests can drive the recursion with an exact
// noise oracle; the NoisePredictor form is the production path.
using NoiseEstimator = std::function<Tensor(const Tensor&, int)>;
Tensor dynamic_sample(const Tensor& x_tilde, double noise_var, const NoiseEstimator& estimate,
                      const DiffusionSchedule& sched);
Tensor dynamic_sample(const Tensor& x_tilde, double noise_var, const NoisePredictor& predictor,
                      const DiffusionSchedule& sched, bool predictor_trained = true);

// Stochastic comparison mode: DDPM-style reverse steps with noise injection.
Tensor stochastic_sample(const Tensor& x_tilde, double noise_var,
                         const NoisePredictor& predictor, const DiffusionSchedule& sched,
                         Rng& rng);

Tensor one_step_denoise(const Tensor& x_tilde, const OneStepDenoiser& baseline);

}  // namespace hdasc
