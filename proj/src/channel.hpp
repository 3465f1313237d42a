#pragma once

#include "modulation.hpp"

namespace hdasc {

enum class ChannelKind { AWGN, Rayleigh, Rician };

ChannelKind channel_kind_from_string(const std::string& s);
std::string channel_kind_name(ChannelKind k);

// Block-fading realization: one coefficient per frame (one frame per image),
// noise variance fixed by the SNR target.
struct ChannelRealization {
    cplx h{1.0, 0.0};
    double sigma_n2 = 0.0;  // per complex symbol
    ChannelKind kind = ChannelKind::AWGN;
    bool noiseless = false;
};

// AWGN: h = 1. Rayleigh: h ~ CN(0,1). Rician(r): h ~ CN(mu, sigma_h^2) with
// mu = sqrt(r/(r+1)), sigma_h = sqrt(1/(r+1)).
ChannelRealization sample_channel(ChannelKind kind, Rng& rng, double rician_r = 1.0);

// y = h x + n with n ~ CN(0, sigma_n2 I); sigma_n2 = 10^(-snr/10) so that a
// unit-power frame meets the SNR target in expectation.
std::vector<cplx> apply_channel(const std::vector<cplx>& x, ChannelRealization& real,
                                double snr_db, Rng& rng, bool noiseless = false);

struct LsDetection {
    std::vector<cplx> x_hat;
    double sigma_eff2 = 0.0;  // sigma_n2 / |h|^2
};

// Least-squares detection under perfect CSI: x_hat = (h*/|h|^2) y.
// Frames in a fade deeper than |h|^2 < 1e-12 are dropped by the caller.
LsDetection ls_detect(const std::vector<cplx>& y, const ChannelRealization& real);

// Effective post-detection noise (h*/|h|^2) n for the in-graph training path.
std::vector<cplx> ls_effective_noise(const ChannelRealization& real, size_t count, Rng& rng);

inline double bandwidth_ratio(size_t symbols, int height, int width) {
    return static_cast<double>(symbols) / (3.0 * height * width);
}

constexpr double kDeepFadeThreshold = 1e-12;

}  // namespace hdasc
