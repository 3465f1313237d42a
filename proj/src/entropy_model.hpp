#pragma once

#include <cstdint>

#include "layers.hpp"

namespace hdasc {

// Round half away from zero, saturating at +/-support. `saturations`, when
// given, counts clipped values (logged by callers).
std::vector<int32_t> quantize(const Tensor& z, int support = 255, size_t* saturations = nullptr);
Tensor dequantize(const std::vector<int32_t>& symbols, const Shape& shape);
double round_half_away(double v);

// Canonical fixed-point coding table: one 16-bit frequency row per channel
// over the integer support, every bin >= 1, row sum exactly 1<<16. Encoder
// and decoder both derive it from the density parameters, so real-valued
// training state can never make them disagree.
struct CodingTable {
    int support = 255;
    std::vector<std::vector<uint32_t>> freq;  // [channels][2*support+1]
    std::vector<std::vector<uint32_t>> cum;   // prefix sums, one row longer

    int bins() const { return 2 * support + 1; }
    int channels() const { return static_cast<int>(freq.size()); }
};

// Univariate non-parametric cumulative model per channel: four composed
// monotone layers with three internal filters, softplus-reparameterized
// weights and tanh-bounded residual factors, sigmoid output.
class FactorizedDensity {
public:
    FactorizedDensity() = default;
    FactorizedDensity(int channels, Rng& rng, double init_scale = 10.0);

    int channels() const { return channels_; }

    // Cumulative c(v) evaluated at a [1,n] row of points; monotone in v.
    Var cumulative(int channel, const Var& points) const;
    Tensor cumulative(int channel, const Tensor& points) const;

    // c(bin+1/2) - c(bin-1/2) with tail mass folded into the edge bins,
    // floored at 2^-16 and renormalized over the support.
    double bin_probability(int bin, int channel, int support = 255) const;

    // Mean nats per symbol of the noise-proxied digital features under the
    // model; differentiable w.r.t. both the density parameters and zd.
    // zd is channel-major with numel divisible by channels.
    Var rate_loss(const Var& zd) const;
    double rate_loss_value(const Tensor& zd) const;

    CodingTable freeze(int support = 255) const;

    void collect(const std::string& prefix, ParamList& out);

private:
    template <class T>
    T cumulative_impl(int channel, const T& points) const;

    std::vector<double> raw_pmf(int channel, int support) const;

    int channels_ = 0;
    struct ChannelParams {
        Var h1, b1, a1;  // [3,1],[3],[3]
        Var h2, b2, a2;  // [3,3],[3],[3]
        Var h3, b3, a3;  // [3,3],[3],[3]
        Var h4, b4;      // [1,3],[1]
    };
    std::vector<ChannelParams> params_;
};

constexpr double kMinBinProbability = 1.0 / 65536.0;  // 2^-16 floor

}  // namespace hdasc
