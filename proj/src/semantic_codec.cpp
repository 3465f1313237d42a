#include "semantic_codec.hpp"

namespace hdasc {

namespace {
// |.| stays exact (zero at zero difference); the backward pass handles the kink.
constexpr double kAbsEps = 0.0;
}

Var loss_semantic_distortion(const Var& image, const Var& reconstruction, double lambda_f) {
    require_same_shape(image.value(), reconstruction.value(), "loss_semantic_distortion");
    const int ch = image.value().dim(0), h = image.value().dim(1), w = image.value().dim(2);
    Var diff = sub(image, reconstruction);
    Var mse = mean(mul(diff, diff));
    if (lambda_f == 0.0) return mse;
    const size_t plane = static_cast<size_t>(h) * w;
    Var flat = reshape(diff, Shape{ch * h * w});
    Var freq;
    for (int c = 0; c < ch; ++c) {
        Var plane_diff = reshape(slice(flat, plane * c, plane), Shape{h, w});
        Var mag = mean(hypot_pair(dft2d(plane_diff), kAbsEps));
        freq = freq.defined() ? add(freq, mag) : mag;
    }
    return add(mse, scale(freq, lambda_f / ch));
}

double loss_semantic_distortion_value(const Tensor& image, const Tensor& reconstruction,
                                      double lambda_f) {
    return loss_semantic_distortion(Var::constant(image), Var::constant(reconstruction), lambda_f)
        .value()[0];
}

}  // namespace hdasc
