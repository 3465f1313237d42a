#include "diffusion.hpp"

#include <cmath>

namespace hdasc {

DiffusionSchedule build_schedule(int steps) {
    if (steps < 1) throw ConfigError("diffusion schedule: steps must be >= 1");
    DiffusionSchedule s;
    s.steps = steps;
    s.gamma.assign(steps + 1, 0.0);
    s.alpha_bar.assign(steps + 1, 1.0);
    s.gamma_bar.assign(steps + 1, 0.0);
    double prod = 1.0;
    for (int t = 1; t <= steps; ++t) {
        s.gamma[t] = 0.5 * t / steps;
        prod *= 1.0 - s.gamma[t];
        s.alpha_bar[t] = std::sqrt(prod);
        s.gamma_bar[t] = std::sqrt(1.0 - prod);
    }
    return s;
}

Tensor forward_sample(const Tensor& x0, int t, const Tensor& eps,
                      const DiffusionSchedule& sched) {
    if (t < 1 || t > sched.steps)
        throw DomainError("forward_sample: step " + std::to_string(t) + " out of range");
    require_same_shape(x0, eps, "forward_sample");
    Tensor out(x0.shape());
    const double a = sched.alpha_bar[t], g = sched.gamma_bar[t];
    for (size_t i = 0; i < x0.numel(); ++i) out[i] = a * x0[i] + g * eps[i];
    return out;
}

Tensor NoisePredictor::step_embedding(int t, int dim) {
    Tensor emb(Shape{dim});
    const int half = dim / 2;
    for (int i = 0; i < half; ++i) {
        const double freq = std::exp(-std::log(10000.0) * i / half);
        emb[2 * i] = std::sin(t * freq);
        emb[2 * i + 1] = std::cos(t * freq);
    }
    return emb;
}

Var diffusion_loss(const std::vector<Tensor>& x0_batch, const NoisePredictor& predictor,
                   const DiffusionSchedule& sched, Rng& rng, const StepSampler& step_sampler) {
    if (x0_batch.empty()) throw ConfigError("diffusion_loss: empty batch");
    Var total;
    for (const Tensor& x0 : x0_batch) {
        const int t = step_sampler ? step_sampler(rng)
                                   : 1 + static_cast<int>(rng.next_below(sched.steps));
        Tensor eps = Tensor::normal(x0.shape(), rng);
        Tensor xt = forward_sample(x0, t, eps, sched);
        Var pred = predictor.predict(Var::constant(xt), t);
        Var d = sub(pred, Var::constant(eps));
        Var l = sum(mul(d, d));
        total = total.defined() ? add(total, l) : l;
    }
    return scale(total, 1.0 / static_cast<double>(x0_batch.size()));
}

Tensor rescale_detected(const Tensor& x_hat, double noise_var) {
    if (noise_var < 0.0) throw DomainError("rescale_detected: negative noise variance");
    return scale(x_hat, 1.0 / std::sqrt(1.0 + noise_var));
}

int map_noise_to_step(double noise_var, const DiffusionSchedule& sched) {
    if (noise_var < 0.0) throw DomainError("map_noise_to_step: negative noise variance");
    const double coef = 1.0 / std::sqrt(1.0 + noise_var);
    // alpha_bar decreases from 1; pick the largest t with alpha_bar(t) >= coef.
    // The tolerance absorbs rounding when a measured variance lands exactly
    // on a table value.
    const double tol = coef * 1e-14;
    if (coef <= sched.alpha_bar[sched.steps] + tol) return sched.steps;
    int t = 0;
    while (t < sched.steps && sched.alpha_bar[t + 1] >= coef - tol) ++t;
    return t;
}

namespace {

Tensor reverse_step(const Tensor& x, int t, const Tensor& eps_hat,
                    const DiffusionSchedule& sched) {
    const double g = sched.gamma[t];
    const double gb = sched.gamma_bar[t];
    const double inv = 1.0 / std::sqrt(1.0 - g);
    Tensor out(x.shape());
    for (size_t i = 0; i < x.numel(); ++i) out[i] = inv * (x[i] - (g / gb) * eps_hat[i]);
    return out;
}

}  // namespace

Tensor dynamic_sample(const Tensor& x_tilde, double noise_var, const NoiseEstimator& estimate,
                      const DiffusionSchedule& sched) {
    Tensor x = x_tilde;
    for (int t = map_noise_to_step(noise_var, sched); t >= 1; --t)
        x = reverse_step(x, t, estimate(x, t), sched);
    return x;
}

Tensor dynamic_sample(const Tensor& x_tilde, double noise_var, const NoisePredictor& predictor,
                      const DiffusionSchedule& sched, bool predictor_trained) {
    if (!predictor_trained) throw ConfigError("dynamic_sample: predictor is not trained");
    return dynamic_sample(x_tilde, noise_var,
                          [&](const Tensor& x, int t) { return predictor.predict(x, t); }, sched);
}

Tensor stochastic_sample(const Tensor& x_tilde, double noise_var,
                         const NoisePredictor& predictor, const DiffusionSchedule& sched,
                         Rng& rng) {
    Tensor x = x_tilde;
    for (int t = map_noise_to_step(noise_var, sched); t >= 1; --t) {
        x = reverse_step(x, t, predictor.predict(x, t), sched);
        if (t > 1) {
            const double sigma = std::sqrt(sched.gamma[t]) * sched.gamma_bar[t - 1] / sched.gamma_bar[t];
            for (size_t i = 0; i < x.numel(); ++i) x[i] += sigma * rng.normal();
        }
    }
    return x;
}

Tensor one_step_denoise(const Tensor& x_tilde, const OneStepDenoiser& baseline) {
    return sub(x_tilde, baseline.predict_residual(x_tilde));
}

}  // namespace hdasc
