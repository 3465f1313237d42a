#pragma once

#include <complex>

#include "layers.hpp"

namespace hdasc {

struct HdaConfig {
    int feature_channels = 16;  // semantic feature channels
    int feature_grid = 16;      // semantic feature spatial size
    int hyper_hidden = 32;
    int hyper_channels = 8;     // digital feature channels (DA-ratio knob)
    int analog_symbols = 1024;  // L_A
    int analog_hidden = 512;
    double leaky_slope = 0.2;

    int hyper_grid() const { return feature_grid / 4; }
    int feature_dim() const { return feature_channels * feature_grid * feature_grid; }
    int digital_dim() const { return hyper_channels * hyper_grid() * hyper_grid(); }
};

// Two stride-2 convolutions down, mirrored sub-pixel upsampling back. The
// decoder instance is shared between transmitter and receiver.
class HyperCodec {
public:
    HyperCodec() = default;
    HyperCodec(const HdaConfig& cfg, Rng& rng)
        : slope_(cfg.leaky_slope),
          e1_(cfg.feature_channels, cfg.hyper_hidden, 3, 2, 1, rng),
          e2_(cfg.hyper_hidden, cfg.hyper_channels, 3, 2, 1, rng),
          d1_(cfg.hyper_channels, cfg.hyper_hidden * 4, 3, 1, 1, rng),
          d2_(cfg.hyper_hidden, cfg.feature_channels * 4, 3, 1, 1, rng) {}

    // z [C_z,g,g] -> z_D [C_d, g/4, g/4]
    template <class T>
    T encode(const T& z) const {
        return e2_.apply(leaky_relu(e1_.apply(z), slope_));
    }

    // z_D layout -> coarse features with z's layout
    template <class T>
    T decode(const T& zd) const {
        T u1 = leaky_relu(pixel_shuffle(d1_.apply(zd), 2), slope_);
        return pixel_shuffle(d2_.apply(u1), 2);
    }

    void collect_encoder(ParamList& out) {
        e1_.collect("theta_t/e1", out);
        e2_.collect("theta_t/e2", out);
    }
    void collect_decoder(ParamList& out) {
        d1_.collect("theta_r/d1", out);
        d2_.collect("theta_r/d2", out);
    }

private:
    double slope_ = 0.2;
    Conv2dLayer e1_, e2_, d1_, d2_;
};

enum class QuantMode { TrainProxy, Round, Disabled };

// z_D pre-quantization, its quantized/proxied form, the coarse reconstruction
// and the analog residual z_A = z - z_tilde (exact by construction).
template <class T>
struct Allocation {
    T z_d;
    T z_tilde_d;
    T z_tilde;
    T z_a;
};

Allocation<Var> allocate(const Var& z, const HyperCodec& hyper, QuantMode mode, Rng* rng);
Allocation<Tensor> allocate(const Tensor& z, const HyperCodec& hyper, QuantMode mode, Rng* rng);

// Fusion: coarse reconstruction from the digital part plus the analog part.
template <class T>
T fuse(const T& z_a_hat, const T& z_d_hat, const HyperCodec& hyper) {
    return add(hyper.decode(z_d_hat), z_a_hat);
}

// Dense analog channel codec over interleaved (re,im) pairs with unit average
// symbol power after normalization.
class AnalogCodec {
public:
    AnalogCodec() = default;
    AnalogCodec(const HdaConfig& cfg, Rng& rng)
        : slope_(cfg.leaky_slope),
          symbols_(cfg.analog_symbols),
          e1_(cfg.feature_dim(), cfg.analog_hidden, rng),
          e2_(cfg.analog_hidden, 2 * cfg.analog_symbols, rng),
          d1_(2 * cfg.analog_symbols, cfg.analog_hidden, rng),
          d2_(cfg.analog_hidden, cfg.feature_dim(), rng) {}

    int symbols() const { return symbols_; }

    // z_A (any layout) -> power-normalized interleaved frame [2*L_A]
    template <class T>
    T encode(const T& z_a) const {
        T flat = flatten(z_a);
        T raw = e2_.apply(leaky_relu(e1_.apply(flat), slope_));
        return power_normalize(raw);
    }

    // interleaved detected frame [2*L_A] -> z_A layout (flat)
    template <class T>
    T decode(const T& x_hat) const {
        return d2_.apply(leaky_relu(d1_.apply(x_hat), slope_));
    }

    void collect_encoder(ParamList& out) {
        e1_.collect("beta_t/e1", out);
        e2_.collect("beta_t/e2", out);
    }
    void collect_decoder(ParamList& out) {
        d1_.collect("beta_r/d1", out);
        d2_.collect("beta_r/d2", out);
    }

    // Scale to unit mean |symbol|^2 (pairs of reals form one symbol).
    template <class T>
    T power_normalize(const T& frame) const {
        if constexpr (std::is_same_v<T, Var>) {
            double p = 0.0;
            for (size_t i = 0; i < frame.value().numel(); ++i)
                p += frame.value()[i] * frame.value()[i];
            if (p < 1e-30) throw EncodingError("analog frame has zero power");
            Var s = scale(sum(mul(frame, frame)), 1.0 / symbols_);
            return bcast_mul(frame, pow_scalar(s, -0.5));
        } else {
            double p = 0.0;
            for (size_t i = 0; i < frame.numel(); ++i) p += frame[i] * frame[i];
            if (p < 1e-30) throw EncodingError("analog frame has zero power");
            return scale(frame, 1.0 / std::sqrt(p / symbols_));
        }
    }

private:
    template <class T>
    static T flatten(const T& x) {
        if constexpr (std::is_same_v<T, Var>)
            return reshape(x, Shape{static_cast<int>(x.value().numel())});
        else
            return x.reshaped(Shape{static_cast<int>(x.numel())});
    }

    double slope_ = 0.2;
    int symbols_ = 0;
    DenseLayer e1_, e2_, d1_, d2_;
};

// E||z - z_hat|| + lambda_z E||z - coarse||^2 (first norm unsquared as the
// default; a squared variant sits behind `squared_first_term`).
Var loss_channel_distortion(const Var& z, const Var& z_hat, const Var& coarse, double lambda_z,
                            bool squared_first_term = false);
double loss_channel_distortion_value(const Tensor& z, const Tensor& z_hat, const Tensor& coarse,
                                     double lambda_z, bool squared_first_term = false);

// Interleaving convention: element 2i is Re(symbol i), 2i+1 is Im(symbol i).
std::vector<std::complex<double>> interleaved_to_complex(const Tensor& frame);
Tensor complex_to_interleaved(const std::vector<std::complex<double>>& symbols);

}  // namespace hdasc
