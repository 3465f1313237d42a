#pragma once

#include <string>

#include "tensor.hpp"

namespace hdasc {

// 10 log10(1/MSE) on the [0,1] pixel scale, capped at 100 dB for identical
// images.
double compute_psnr(const Tensor& a, const Tensor& b);

// Multi-scale structural similarity on the luminance plane, 11x11 Gaussian
// window (sigma 1.5), 2x2 mean-pool between scales, standard per-scale
// weights renormalized to the scale count. Scale count auto-reduces with
// image size (3 scales at 64x64); images below one 11-pixel window are an
// error.
double compute_ms_ssim(const Tensor& a, const Tensor& b);
int ms_ssim_scales(int height, int width);

struct MetricsRecord {
    double snr_db = 0.0;
    std::string channel = "awgn";
    double eta = 0.0;          // bandwidth compression ratio L/(3HW)
    double da_ratio = 0.0;     // L_D / L_A
    double bits_per_pixel = 0.0;
    double psnr_db = 0.0;
    double ms_ssim = 0.0;
    int frames_dropped = 0;
    std::string denoiser = "off";
    bool encrypted = false;

    static std::string csv_header();
    std::string csv_row() const;
};

}  // namespace hdasc
