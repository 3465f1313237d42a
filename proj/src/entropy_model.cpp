#include "entropy_model.hpp"

#include <cmath>

namespace hdasc {

double round_half_away(double v) {
    return v >= 0.0 ? std::floor(v + 0.5) : std::ceil(v - 0.5);
}

std::vector<int32_t> quantize(const Tensor& z, int support, size_t* saturations) {
    std::vector<int32_t> out(z.numel());
    size_t clipped = 0;
    for (size_t i = 0; i < z.numel(); ++i) {
        double r = round_half_away(z[i]);
        if (r > support) {
            r = support;
            ++clipped;
        } else if (r < -support) {
            r = -support;
            ++clipped;
        }
        out[i] = static_cast<int32_t>(r);
    }
    if (saturations) *saturations = clipped;
    return out;
}

Tensor dequantize(const std::vector<int32_t>& symbols, const Shape& shape) {
    if (shape_numel(shape) != symbols.size())
        throw DimensionError("dequantize: symbol count does not match shape");
    Tensor out(shape);
    for (size_t i = 0; i < symbols.size(); ++i) out[i] = static_cast<double>(symbols[i]);
    return out;
}

namespace {

// softplus inverse, used for layer weight initialization
double softplus_inv(double y) { return std::log(std::expm1(y)); }

}  // namespace

FactorizedDensity::FactorizedDensity(int channels, Rng& rng, double init_scale)
    : channels_(channels) {
    if (channels < 1) throw ConfigError("factorized density: channels must be >= 1");
    const double scale = std::pow(init_scale, 0.25);
    params_.reserve(channels);
    for (int c = 0; c < channels; ++c) {
        ChannelParams p;
        p.h1 = Var::param(Tensor::full(Shape{3, 1}, softplus_inv(1.0 / (scale * 3.0))));
        p.h2 = Var::param(Tensor::full(Shape{3, 3}, softplus_inv(1.0 / (scale * 3.0))));
        p.h3 = Var::param(Tensor::full(Shape{3, 3}, softplus_inv(1.0 / (scale * 3.0))));
        p.h4 = Var::param(Tensor::full(Shape{1, 3}, softplus_inv(1.0 / scale)));
        p.b1 = Var::param(Tensor::uniform(Shape{3}, rng, -0.5, 0.5));
        p.b2 = Var::param(Tensor::uniform(Shape{3}, rng, -0.5, 0.5));
        p.b3 = Var::param(Tensor::uniform(Shape{3}, rng, -0.5, 0.5));
        p.b4 = Var::param(Tensor::uniform(Shape{1}, rng, -0.5, 0.5));
        p.a1 = Var::param(Tensor::zeros(Shape{3}));
        p.a2 = Var::param(Tensor::zeros(Shape{3}));
        p.a3 = Var::param(Tensor::zeros(Shape{3}));
        params_.push_back(std::move(p));
    }
}

template <class T>
T FactorizedDensity::cumulative_impl(int channel, const T& points) const {
    const ChannelParams& p = params_[channel];
    auto lift = [](const Var& v) -> const Var& { return v; };
    if constexpr (std::is_same_v<T, Tensor>) {
        auto val = [](const Var& v) -> const Tensor& { return v.value(); };
        Tensor y = add_col_bias(matmul(softplus_op(val(p.h1)), points), val(p.b1));
        y = add(y, rowwise_mul(tanh_op(y), tanh_op(val(p.a1))));
        y = add_col_bias(matmul(softplus_op(val(p.h2)), y), val(p.b2));
        y = add(y, rowwise_mul(tanh_op(y), tanh_op(val(p.a2))));
        y = add_col_bias(matmul(softplus_op(val(p.h3)), y), val(p.b3));
        y = add(y, rowwise_mul(tanh_op(y), tanh_op(val(p.a3))));
        y = add_col_bias(matmul(softplus_op(val(p.h4)), y), val(p.b4));
        return sigmoid_op(y);
    } else {
        Var y = add_col_bias(matmul(softplus_op(lift(p.h1)), points), p.b1);
        y = add(y, rowwise_mul(tanh_op(y), tanh_op(lift(p.a1))));
        y = add_col_bias(matmul(softplus_op(lift(p.h2)), y), p.b2);
        y = add(y, rowwise_mul(tanh_op(y), tanh_op(lift(p.a2))));
        y = add_col_bias(matmul(softplus_op(lift(p.h3)), y), p.b3);
        y = add(y, rowwise_mul(tanh_op(y), tanh_op(lift(p.a3))));
        y = add_col_bias(matmul(softplus_op(lift(p.h4)), y), p.b4);
        return sigmoid_op(y);
    }
}

Var FactorizedDensity::cumulative(int channel, const Var& points) const {
    return cumulative_impl(channel, points);
}

Tensor FactorizedDensity::cumulative(int channel, const Tensor& points) const {
    return cumulative_impl(channel, points);
}

std::vector<double> FactorizedDensity::raw_pmf(int channel, int support) const {
    const int bins = 2 * support + 1;
    Tensor pts(Shape{1, bins + 1});
    for (int i = 0; i <= bins; ++i) pts[i] = -support - 0.5 + i;
    Tensor c = cumulative(channel, pts);
    std::vector<double> pmf(bins);
    for (int i = 0; i < bins; ++i) pmf[i] = std::max(0.0, c[i + 1] - c[i]);
    // fold tail mass into the edge bins so the support carries all of it
    pmf.front() += std::max(0.0, c[0]);
    pmf.back() += std::max(0.0, 1.0 - c[bins]);
    return pmf;
}

double FactorizedDensity::bin_probability(int bin, int channel, int support) const {
    if (channel < 0 || channel >= channels_) throw DimensionError("bin_probability: channel index");
    if (bin < -support || bin > support) return 0.0;
    std::vector<double> pmf = raw_pmf(channel, support);
    double total = 0.0;
    for (double& p : pmf) {
        p = std::max(p, kMinBinProbability);
        total += p;
    }
    return pmf[bin + support] / total;
}

Var FactorizedDensity::rate_loss(const Var& zd) const {
    const size_t n = zd.value().numel();
    if (n % channels_ != 0)
        throw DimensionError("rate_loss: features not divisible into channels");
    const size_t per = n / channels_;
    Var total;
    for (int c = 0; c < channels_; ++c) {
        Var row = reshape(slice(zd, per * c, per), Shape{1, static_cast<int>(per)});
        Var hi = cumulative(c, add_scalar(row, 0.5));
        Var lo = cumulative(c, add_scalar(row, -0.5));
        Var p = clamp_min(sub(hi, lo), kMinBinProbability);
        Var nll = scale(sum(log_op(p)), -1.0);
        total = total.defined() ? add(total, nll) : nll;
    }
    return scale(total, 1.0 / static_cast<double>(n));
}

double FactorizedDensity::rate_loss_value(const Tensor& zd) const {
    const size_t n = zd.numel();
    if (n % channels_ != 0)
        throw DimensionError("rate_loss: features not divisible into channels");
    const size_t per = n / channels_;
    double total = 0.0;
    for (int c = 0; c < channels_; ++c) {
        Tensor row(Shape{1, static_cast<int>(per)});
        for (size_t i = 0; i < per; ++i) row[i] = zd[per * c + i];
        Tensor hi = cumulative(c, add_scalar(row, 0.5));
        Tensor lo = cumulative(c, add_scalar(row, -0.5));
        for (size_t i = 0; i < per; ++i)
            total -= std::log(std::max(hi[i] - lo[i], kMinBinProbability));
    }
    return total / static_cast<double>(n);
}

CodingTable FactorizedDensity::freeze(int support) const {
    CodingTable table;
    table.support = support;
    const int bins = 2 * support + 1;
    const uint32_t total = 1u << 16;
    table.freq.resize(channels_);
    table.cum.resize(channels_);
    for (int c = 0; c < channels_; ++c) {
        std::vector<double> pmf = raw_pmf(c, support);
        double mass = 0.0;
        for (double p : pmf) mass += p;
        // every bin gets at least 1/65536; remaining mass scaled on top
        const uint32_t spare = total - static_cast<uint32_t>(bins);
        std::vector<uint32_t> freq(bins);
        uint64_t assigned = 0;
        for (int i = 0; i < bins; ++i) {
            freq[i] = 1 + static_cast<uint32_t>(std::floor(pmf[i] / mass * spare));
            assigned += freq[i];
        }
        // distribute the rounding remainder deterministically to the largest bins
        int64_t rem = static_cast<int64_t>(total) - static_cast<int64_t>(assigned);
        while (rem != 0) {
            size_t arg = 0;
            for (size_t i = 1; i < freq.size(); ++i)
                if (freq[i] > freq[arg]) arg = i;
            if (rem > 0) {
                ++freq[arg];
                --rem;
            } else {
                if (freq[arg] > 1) --freq[arg];
                ++rem;
            }
        }
        std::vector<uint32_t> cum(bins + 1, 0);
        for (int i = 0; i < bins; ++i) cum[i + 1] = cum[i] + freq[i];
        if (cum[bins] != total) throw EncodingError("coding table normalization failed");
        table.freq[c] = std::move(freq);
        table.cum[c] = std::move(cum);
    }
    return table;
}

void FactorizedDensity::collect(const std::string& prefix, ParamList& out) {
    for (int c = 0; c < channels_; ++c) {
        const std::string base = prefix + "/ch" + std::to_string(c) + "/";
        ChannelParams& p = params_[c];
        out.push_back({base + "h1", p.h1});
        out.push_back({base + "b1", p.b1});
        out.push_back({base + "a1", p.a1});
        out.push_back({base + "h2", p.h2});
        out.push_back({base + "b2", p.b2});
        out.push_back({base + "a2", p.a2});
        out.push_back({base + "h3", p.h3});
        out.push_back({base + "b3", p.b3});
        out.push_back({base + "a3", p.a3});
        out.push_back({base + "h4", p.h4});
        out.push_back({base + "b4", p.b4});
    }
}

}  // namespace hdasc
