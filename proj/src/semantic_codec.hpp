#pragma once

#include "image.hpp"
#include "layers.hpp"

namespace hdasc {

// Compact convolutional semantic codec. The encoder downsamples by 4 with a
// residual skip from the first to the last layer; the decoder mirrors it and
// finishes with a x4 pixel shuffle, output clamped to [0,1].
struct SemanticCodecConfig {
    int image_size = 64;
    int hidden_channels = 32;
    int feature_channels = 16;

    int feature_grid() const { return image_size / 4; }
    int feature_dim() const { return feature_channels * feature_grid() * feature_grid(); }
};

class SemanticEncoder {
public:
    SemanticEncoder() = default;
    SemanticEncoder(const SemanticCodecConfig& cfg, Rng& rng)
        : c1_(3, cfg.hidden_channels, 3, 2, 1, rng),
          c2_(cfg.hidden_channels, cfg.hidden_channels, 3, 1, 1, rng),
          c3_(cfg.hidden_channels, cfg.hidden_channels, 3, 2, 1, rng),
          c4_(cfg.hidden_channels, cfg.feature_channels, 3, 1, 1, rng),
          skip_(cfg.hidden_channels, cfg.feature_channels, 1, 2, 0, rng) {}

    // image [3,H,W] -> features [C_z, H/4, W/4]
    template <class T>
    T forward(const T& image) const {
        T h1 = relu(c1_.apply(image));
        T h2 = relu(c2_.apply(h1));
        T h3 = relu(c3_.apply(h2));
        return add(c4_.apply(h3), skip_.apply(h1));
    }

    void collect(ParamList& out) {
        c1_.collect("alpha_t/c1", out);
        c2_.collect("alpha_t/c2", out);
        c3_.collect("alpha_t/c3", out);
        c4_.collect("alpha_t/c4", out);
        skip_.collect("alpha_t/skip", out);
    }

private:
    Conv2dLayer c1_, c2_, c3_, c4_, skip_;
};

class SemanticDecoder {
public:
    SemanticDecoder() = default;
    SemanticDecoder(const SemanticCodecConfig& cfg, Rng& rng)
        : d1_(cfg.feature_channels, cfg.hidden_channels, 3, 1, 1, rng),
          d2_(cfg.hidden_channels, cfg.hidden_channels, 3, 1, 1, rng),
          d3_(cfg.hidden_channels, 3 * 16, 3, 1, 1, rng) {}

    // features [C_z, g, g] -> image [3, 4g, 4g], every pixel in [0,1]
    template <class T>
    T forward(const T& features) const {
        T h1 = relu(d1_.apply(features));
        T h2 = relu(d2_.apply(h1));
        return clamp(pixel_shuffle(d3_.apply(h2), 4), 0.0, 1.0);
    }

    void collect(ParamList& out) {
        d1_.collect("alpha_r/d1", out);
        d2_.collect("alpha_r/d2", out);
        d3_.collect("alpha_r/d3", out);
    }

private:
    Conv2dLayer d1_, d2_, d3_;
};

// Mean-square pixel error plus lambda_f times the mean modulus of the
// orthonormal 2-D DFT difference, per color channel, averaged.
Var loss_semantic_distortion(const Var& image, const Var& reconstruction, double lambda_f);
double loss_semantic_distortion_value(const Tensor& image, const Tensor& reconstruction,
                                      double lambda_f);

}  // namespace hdasc
