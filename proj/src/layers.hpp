#pragma once

#include <string>

#include "autodiff.hpp"

namespace hdasc {

struct NamedParam {
    std::string name;
    Var var;
};

using ParamList = std::vector<NamedParam>;

// He-style fan-in uniform initialization, seeded by the caller's Rng.
inline Tensor he_uniform(Shape shape, int fan_in, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    return Tensor::uniform(std::move(shape), rng, -limit, limit);
}

class DenseLayer {
public:
    DenseLayer() = default;

    DenseLayer(int in, int out, Rng& rng)
        : w_(Var::param(he_uniform(Shape{out, in}, in, rng))),
          b_(Var::param(Tensor::zeros(Shape{out}))) {}

    template <class T>
    T apply(const T& x) const {
        if constexpr (std::is_same_v<T, Var>)
            return dense(x, w_, b_);
        else
            return dense(x, w_.value(), b_.value());
    }

    void collect(const std::string& prefix, ParamList& out) {
        out.push_back({prefix + ".w", w_});
        out.push_back({prefix + ".b", b_});
    }

    int in_features() const { return w_.value().dim(1); }
    int out_features() const { return w_.value().dim(0); }

private:
    Var w_, b_;
};

class Conv2dLayer {
public:
    Conv2dLayer() = default;

    Conv2dLayer(int in_c, int out_c, int k, int stride, int pad, Rng& rng)
        : w_(Var::param(he_uniform(Shape{out_c, in_c, k, k}, in_c * k * k, rng))),
          b_(Var::param(Tensor::zeros(Shape{out_c}))),
          stride_(stride),
          pad_(pad) {}

    template <class T>
    T apply(const T& x) const {
        if constexpr (std::is_same_v<T, Var>)
            return conv2d(x, w_, b_, stride_, pad_);
        else
            return conv2d(x, w_.value(), b_.value(), stride_, pad_);
    }

    void collect(const std::string& prefix, ParamList& out) {
        out.push_back({prefix + ".w", w_});
        out.push_back({prefix + ".b", b_});
    }

    int out_channels() const { return w_.value().dim(0); }

private:
    Var w_, b_;
    int stride_ = 1, pad_ = 0;
};

}  // namespace hdasc
