#include "hda_link.hpp"

#include "entropy_model.hpp"

namespace hdasc {

namespace {

Tensor uniform_quant_noise(const Shape& shape, Rng& rng) {
    Tensor u(shape);
    for (size_t i = 0; i < u.numel(); ++i) u[i] = rng.uniform(-0.5, 0.5);
    return u;
}

Tensor round_tensor(const Tensor& t) {
    Tensor out(t.shape());
    for (size_t i = 0; i < t.numel(); ++i) out[i] = round_half_away(t[i]);
    return out;
}

}  // namespace

Allocation<Var> allocate(const Var& z, const HyperCodec& hyper, QuantMode mode, Rng* rng) {
    Allocation<Var> a;
    a.z_d = hyper.encode(z);
    switch (mode) {
        case QuantMode::TrainProxy:
            if (!rng) throw ConfigError("allocate: train proxy requires an rng");
            a.z_tilde_d = add(a.z_d, Var::constant(uniform_quant_noise(a.z_d.value().shape(), *rng)));
            break;
        case QuantMode::Round:
            // rounding blocks gradients; the proxy replaces it during training
            a.z_tilde_d = Var::constant(round_tensor(a.z_d.value()));
            break;
        case QuantMode::Disabled:
            a.z_tilde_d = a.z_d;
            break;
    }
    a.z_tilde = hyper.decode(a.z_tilde_d);
    a.z_a = sub(z, a.z_tilde);
    return a;
}

Allocation<Tensor> allocate(const Tensor& z, const HyperCodec& hyper, QuantMode mode, Rng* rng) {
    Allocation<Tensor> a;
    a.z_d = hyper.encode(z);
    switch (mode) {
        case QuantMode::TrainProxy:
            if (!rng) throw ConfigError("allocate: train proxy requires an rng");
            a.z_tilde_d = add(a.z_d, uniform_quant_noise(a.z_d.shape(), *rng));
            break;
        case QuantMode::Round:
            a.z_tilde_d = round_tensor(a.z_d);
            break;
        case QuantMode::Disabled:
            a.z_tilde_d = a.z_d;
            break;
    }
    a.z_tilde = hyper.decode(a.z_tilde_d);
    a.z_a = sub(z, a.z_tilde);
    return a;
}

Var loss_channel_distortion(const Var& z, const Var& z_hat, const Var& coarse, double lambda_z,
                            bool squared_first_term) {
    require_same_shape(z.value(), z_hat.value(), "loss_channel_distortion");
    require_same_shape(z.value(), coarse.value(), "loss_channel_distortion coarse");
    Var d = sub(z, z_hat);
    Var first = squared_first_term ? sum(mul(d, d)) : norm2(d);
    Var dc = sub(z, coarse);
    return add(first, scale(sum(mul(dc, dc)), lambda_z));
}

double loss_channel_distortion_value(const Tensor& z, const Tensor& z_hat, const Tensor& coarse,
                                     double lambda_z, bool squared_first_term) {
    return loss_channel_distortion(Var::constant(z), Var::constant(z_hat), Var::constant(coarse),
                                   lambda_z, squared_first_term)
        .value()[0];
}

std::vector<std::complex<double>> interleaved_to_complex(const Tensor& frame) {
    if (frame.numel() % 2 != 0) throw DimensionError("interleaved frame must have even length");
    std::vector<std::complex<double>> out(frame.numel() / 2);
    for (size_t i = 0; i < out.size(); ++i) out[i] = {frame[2 * i], frame[2 * i + 1]};
    return out;
}

Tensor complex_to_interleaved(const std::vector<std::complex<double>>& symbols) {
    Tensor out(Shape{static_cast<int>(symbols.size() * 2)});
    for (size_t i = 0; i < symbols.size(); ++i) {
        out[2 * i] = symbols[i].real();
        out[2 * i + 1] = symbols[i].imag();
    }
    return out;
}

}  // namespace hdasc
