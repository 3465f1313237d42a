#include "metrics.hpp"

#include <cmath>
#include <cstdio>

namespace hdasc {

double compute_psnr(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "compute_psnr");
    double mse = 0.0;
    for (size_t i = 0; i < a.numel(); ++i) {
        const double d = a[i] - b[i];
        mse += d * d;
    }
    mse /= static_cast<double>(a.numel());
    if (mse <= 0.0) return 100.0;
    return std::min(100.0, 10.0 * std::log10(1.0 / mse));
}

namespace {

constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;
constexpr int kWin = 11;

std::vector<double> gaussian_window() {
    std::vector<double> w(kWin * kWin);
    const double sigma = 1.5;
    double total = 0.0;
    for (int y = 0; y < kWin; ++y)
        for (int x = 0; x < kWin; ++x) {
            const double dy = y - 5.0, dx = x - 5.0;
            w[y * kWin + x] = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
            total += w[y * kWin + x];
        }
    for (double& v : w) v /= total;
    return w;
}

struct Plane {
    int h = 0, w = 0;
    std::vector<double> v;
};

Plane luminance(const Tensor& img) {
    const int h = img.dim(1), w = img.dim(2);
    Plane p{h, w, std::vector<double>(static_cast<size_t>(h) * w)};
    const size_t n = static_cast<size_t>(h) * w;
    for (size_t i = 0; i < n; ++i)
        p.v[i] = 0.299 * img[i] + 0.587 * img[n + i] + 0.114 * img[2 * n + i];
    return p;
}

Plane downsample2(const Plane& p) {
    Plane o{p.h / 2, p.w / 2, {}};
    o.v.resize(static_cast<size_t>(o.h) * o.w);
    for (int y = 0; y < o.h; ++y)
        for (int x = 0; x < o.w; ++x)
            o.v[static_cast<size_t>(y) * o.w + x] =
                0.25 * (p.v[static_cast<size_t>(2 * y) * p.w + 2 * x] +
                        p.v[static_cast<size_t>(2 * y) * p.w + 2 * x + 1] +
                        p.v[static_cast<size_t>(2 * y + 1) * p.w + 2 * x] +
                        p.v[static_cast<size_t>(2 * y + 1) * p.w + 2 * x + 1]);
    return o;
}

// mean luminance term and contrast-structure term over valid windows
void ssim_terms(const Plane& a, const Plane& b, const std::vector<double>& win, double* l_out,
                double* cs_out) {
    double l_acc = 0.0, cs_acc = 0.0;
    int count = 0;
    for (int y = 0; y + kWin <= a.h; ++y)
        for (int x = 0; x + kWin <= a.w; ++x) {
            double mx = 0.0, my = 0.0;
            for (int wy = 0; wy < kWin; ++wy)
                for (int wx = 0; wx < kWin; ++wx) {
                    const double g = win[wy * kWin + wx];
                    mx += g * a.v[static_cast<size_t>(y + wy) * a.w + x + wx];
                    my += g * b.v[static_cast<size_t>(y + wy) * b.w + x + wx];
                }
            double vx = 0.0, vy = 0.0, cov = 0.0;
            for (int wy = 0; wy < kWin; ++wy)
                for (int wx = 0; wx < kWin; ++wx) {
                    const double g = win[wy * kWin + wx];
                    const double da = a.v[static_cast<size_t>(y + wy) * a.w + x + wx] - mx;
                    const double db = b.v[static_cast<size_t>(y + wy) * b.w + x + wx] - my;
                    vx += g * da * da;
                    vy += g * db * db;
                    cov += g * da * db;
                }
            l_acc += (2 * mx * my + kC1) / (mx * mx + my * my + kC1);
            cs_acc += (2 * cov + kC2) / (vx + vy + kC2);
            ++count;
        }
    *l_out = l_acc / count;
    *cs_out = cs_acc / count;
}

const double kWeights5[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

}  // namespace

int ms_ssim_scales(int height, int width) {
    const int md = std::min(height, width);
    int scales = 0;
    while (scales < 5 && md >= kWin * (1 << scales)) ++scales;
    return scales;
}

double compute_ms_ssim(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "compute_ms_ssim");
    const int scales = ms_ssim_scales(a.dim(1), a.dim(2));
    if (scales < 1)
        throw DimensionError("compute_ms_ssim: image smaller than one 11x11 window");

    double wsum = 0.0;
    for (int s = 0; s < scales; ++s) wsum += kWeights5[s];

    static const std::vector<double> win = gaussian_window();
    Plane pa = luminance(a), pb = luminance(b);
    double score = 1.0;
    for (int s = 0; s < scales; ++s) {
        double l = 0.0, cs = 0.0;
        ssim_terms(pa, pb, win, &l, &cs);
        const double w = kWeights5[s] / wsum;
        const double term = s + 1 < scales ? cs : l * cs;
        score *= std::pow(std::max(term, 0.0), w);
        if (s + 1 < scales) {
            pa = downsample2(pa);
            pb = downsample2(pb);
        }
    }
    return score;
}

std::string MetricsRecord::csv_header() {
    return "snr_db,channel,eta,da_ratio,bits_per_pixel,psnr_db,ms_ssim,frames_dropped,denoiser,"
           "encrypted";
}

std::string MetricsRecord::csv_row() const {
    char buf[320];
    std::snprintf(buf, sizeof(buf), "%.4f,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%d,%s,%d", snr_db,
                  channel.c_str(), eta, da_ratio, bits_per_pixel, psnr_db, ms_ssim, frames_dropped,
                  denoiser.c_str(), encrypted ? 1 : 0);
    return buf;
}

}  // namespace hdasc
